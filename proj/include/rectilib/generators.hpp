#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rectilib/space.hpp"

namespace rectilib {

enum class GeneratorKind { interval, circle, grid2d, cantor4, koch, cascade, lipschitz_curve };

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& name);

/// `resolution` is a point count for interval, circle and lipschitz_curve, a
/// side count for grid2d and a level for cantor4, koch and cascade.
///
/// Recognized params (all optional):
///   interval: e_lo, e_hi (target range, default [1/4, 3/4]); holes (flat
///             list a1, b1, a2, b2, ... of open gaps removed from the target)
///   circle: mu_r (nonzero: weights 4 sin(pi/n), guaranteeing mu(B(x, r)) >= 2r
///           at every radius; default weights 2 pi / n); arc_lo, arc_hi (target
///           angles, default [0, pi/2])
///   cascade: ratios (four positive child ratios, default 0.3 0.2 0.3 0.2)
///   lipschitz_curve: polyline (flat x0, y0, x1, y1, ...; default the unit
///           segment); coils (back-and-forth passes, default 1); mass (default 1)
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::interval;
  int resolution = 2;
  std::map<std::string, std::vector<double>> params;
  std::uint64_t seed = 0;

  double param(const std::string& name, double fallback) const;
};

struct Generated {
  MetricMeasureSpace space;
  TargetSet target;
};

Generated generate(const GeneratorSpec& spec);

/// Level-L Koch polyline vertices from (0, 0) to (1, 0), row-major (x, y).
std::vector<double> koch_vertices(int level);

}  // namespace rectilib
