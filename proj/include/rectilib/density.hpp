#pragma once

#include <span>
#include <vector>

#include "rectilib/space.hpp"

namespace rectilib {

/// mu(B(x, r)) / r on a halving radius grid. `lower_estimate` (the grid
/// minimum) stands in for the lower 1-density; the limit itself is out of
/// reach on finite data, so it only means something down to r_lo.
struct DensityProfile {
  PointId point = 0;
  std::vector<double> radii;  // strictly decreasing
  std::vector<double> values;
  double lower_estimate = 0.0;
};

DensityProfile density_profile(const MetricMeasureSpace& space, PointId x, double r_lo, double r_hi);

/// Profiles for many points, evaluated in parallel over points.
std::vector<DensityProfile> density_profiles(const MetricMeasureSpace& space,
                                             std::span<const PointId> points, double r_lo,
                                             double r_hi);

/// Members x of E with mu(B(x, r)) >= r / j for every grid radius r < 1/k,
/// the grid being halving_grid(r_lo, r_hi).
std::vector<PointId> stratify(const MetricMeasureSpace& space, const TargetSet& e, int j, int k,
                              double r_lo, double r_hi);

/// Greedy partition of S into pieces of diameter < bound: seed with the
/// smallest unassigned id and absorb unassigned points within bound / 2.
std::vector<std::vector<PointId>> split_by_diameter(const MetricMeasureSpace& space,
                                                    std::span<const PointId> s, double bound);

struct Beta2Result {
  double beta2 = 0.0;
  std::vector<double> point;      // mass-weighted centroid
  std::vector<double> direction;  // unit, first nonzero component positive
  double diameter = 0.0;
  double mass = 0.0;
};

/// L2 deviation of mu restricted to A from its best line, normalized by
/// diam A. Exact minimizer: centroid plus top principal axis of the weighted
/// second-moment tensor.
Beta2Result beta2(const MetricMeasureSpace& space, std::span<const PointId> a);

struct BsSum {
  double sum = 0.0;
  std::vector<double> terms;  // one per depth 0..depth, 0 for skipped cubes
  std::size_t skipped = 0;
};

/// Truncated sum of diam(Q) / mu(Q) over half-open dyadic cubes Q ∋ x with
/// side 2^-m, m = 0..depth.
BsSum bs_sum(const MetricMeasureSpace& space, PointId x, int depth);

struct LowerMassCheck {
  bool ok = true;
  std::size_t checked = 0;
  PointId witness = 0;
  double radius = 0.0;
  double mass = 0.0;
};

/// Checks mu(B(x, r)) >= 2 r for every x in `points` and r in `radii`.
LowerMassCheck lower_mass_check(const MetricMeasureSpace& space, std::span<const PointId> points,
                                std::span<const double> radii);

}  // namespace rectilib
