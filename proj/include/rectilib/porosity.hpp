#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rectilib/cubes.hpp"
#include "rectilib/space.hpp"

namespace rectilib {

struct PorosityConfig {
  double M = 11.0;       // witness dilation
  double delta = 0.3;    // gap, relative to the cube side
  int n0 = 2;            // bridge level offset
  double rho = 1.0 / 12.0;
  double c0 = 1.0 / 500.0;
  double C_mu = 2.0;     // measured doubling estimate
};

struct ConfigViolation {
  std::string constraint;  // the inequality that failed, e.g. "M > 10"
  std::string reason;      // what the inequality is needed for
};

struct ConfigValidation {
  bool ok = true;
  std::vector<ConfigViolation> violations;
};

/// Checks the parameter inequalities the connectivity argument relies on.
/// Strict mode also pins rho < 1/1000 and c0 = 1/500.
ConfigValidation validate_config(const PorosityConfig& cfg, bool strict = false);

struct PorousCube {
  CubeId cube = 0;
  PointId witness = 0;
  double gap = 0.0;  // dist(witness, E)
};

/// Cubes below the root meeting E whose M-dilate holds a sample point at
/// distance >= delta * side from E; the witness maximizes the gap (ties:
/// smaller id). Sorted by cube id.
std::vector<PorousCube> find_porous(const CubeTree& tree, const MetricMeasureSpace& space,
                                    const TargetSet& e, const PorosityConfig& cfg);

struct AppendixConstants {
  double a = 0.0;
  double C1 = 0.0;
  double b = 1.0;
  std::string b_mode = "observed";  // or "supplied"
};

/// a = C^{log2(c0 / 4M)} (4 / rho)^{log2 C} and C1 = a b C^{log2(M / c0) + 1}.
AppendixConstants appendix_constants(const PorosityConfig& cfg, double b,
                                     std::string b_mode = "observed");

struct CarlesonEntry {
  CubeId cube = 0;
  double porous_mass = 0.0;  // sum of mu over porous cubes inside this one
  double ratio = 0.0;
};

struct CarlesonReport {
  std::vector<CarlesonEntry> entries;  // every cube of the root subtree with positive mass
  double worst_ratio = 0.0;
  CubeId worst_cube = 0;
  std::size_t skipped = 0;  // zero-mass cubes
  AppendixConstants constants;
  std::size_t b_observed = 0;
  bool ok = true;
};

CarlesonReport carleson_check(const CubeTree& tree, const std::vector<PorousCube>& family,
                              const AppendixConstants& constants);

struct ShadowEntry {
  CubeId cube = 0;
  PointId witness = 0;
  std::optional<CubeId> shadow;  // absent: resolution failure
  double gap = 0.0;
  bool gap_bound = true;    // delta side(cube) <= gap <= (4 / rho) side(shadow)
  bool side_bound = true;   // side(shadow) <= (2M / c0) side(cube)
};

struct ShadowReport {
  std::vector<ShadowEntry> entries;
  std::vector<CubeId> maximal_empty;  // the family of maximal cubes with B(center, 2 side) ∩ E = ∅
  std::size_t b_observed = 0;
  std::size_t resolution_failures = 0;
  bool inequalities_ok = true;
};

ShadowReport shadow_map(const CubeTree& tree, const MetricMeasureSpace& space, const TargetSet& e,
                        const std::vector<PorousCube>& family, const PorosityConfig& cfg);

}  // namespace rectilib
