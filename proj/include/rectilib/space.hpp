#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rectilib {

using PointId = std::size_t;

/// Finite metric measure space: a weighted point set with a distance oracle.
///
/// Distances are either induced from coordinates (Euclidean) or read from an
/// explicit symmetric matrix. The object is immutable once constructed, so
/// every query is safe to run concurrently.
class MetricMeasureSpace {
 public:
  MetricMeasureSpace() = default;

  /// Euclidean space from row-major coordinates (`coords.size() == n * dim`).
  static MetricMeasureSpace from_coords(std::size_t dim, std::vector<double> coords,
                                        std::vector<double> weights,
                                        std::vector<std::string> labels = {});

  /// Explicit metric. The matrix is checked for symmetry, zero diagonal and
  /// nonnegativity exactly; the triangle inequality is checked on
  /// `triangle_samples` random triples.
  static MetricMeasureSpace from_matrix(std::vector<double> matrix, std::vector<double> weights,
                                        std::vector<std::string> labels = {},
                                        std::size_t triangle_samples = 1000,
                                        std::uint64_t seed = 0x5eed);

  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  bool has_coords() const noexcept { return dim_ > 0; }
  std::size_t dim() const noexcept { return dim_; }

  double dist(PointId a, PointId b) const noexcept {
    if (dim_ == 0) return matrix_[a * size() + b];
    const double* pa = coords_.data() + a * dim_;
    const double* pb = coords_.data() + b * dim_;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = pa[k] - pb[k];
      s += d * d;
    }
    return std::sqrt(s);
  }

  double weight(PointId p) const noexcept { return weights_[p]; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return total_mass_; }

  std::span<const double> coords(PointId p) const noexcept {
    return {coords_.data() + p * dim_, dim_};
  }
  std::span<const double> all_coords() const noexcept { return coords_; }

  const std::string& label(PointId p) const { return labels_[p]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Internal index of an external label; throws IdentifierError.
  PointId index_of(std::string_view label) const;

  /// Throws IdentifierError when `p` is out of range.
  void check_id(PointId p) const;

 private:
  void finish(std::vector<std::string> labels);

  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> matrix_;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, PointId> index_;
  double total_mass_ = 0.0;
};

/// Open ball: membership is dist(center, p) < radius.
struct Ball {
  PointId center = 0;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Target set E with an enclosing ball B(xi0, r0 / 2).
struct TargetSet {
  std::vector<PointId> members;  // sorted, unique
  double r0 = 0.0;
  PointId xi0 = 0;
};

/// Builds a target set. Without `xi0` the member closest to the coordinate
/// mean (or the first member for matrix spaces) is used; r0 is chosen just
/// large enough that E lies strictly inside B(xi0, r0 / 2).
TargetSet make_target(const MetricMeasureSpace& space, std::vector<PointId> members,
                      std::optional<PointId> xi0 = std::nullopt);

/// Throws ParameterError / IdentifierError if `e` breaks its invariants.
void validate_target(const MetricMeasureSpace& space, const TargetSet& e);

/// Samples `samples` random triples and returns the worst triangle defect
/// max(d(a,c) - d(a,b) - d(b,c), 0).
double triangle_defect(const MetricMeasureSpace& space, std::size_t samples, std::uint64_t seed);

// --- operations -----------------------------------------------------------

double ball_mass(const MetricMeasureSpace& space, const Ball& b);

struct DoublingEstimate {
  double c_hat = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // pairs with mu(B(x, r)) == 0
  PointId worst_center = 0;
  double worst_radius = 0.0;
};

/// max over sampled (x, r) of mu(B(x, 2r)) / mu(B(x, r)).
DoublingEstimate doubling_estimate(const MetricMeasureSpace& space, std::span<const double> radii,
                                   std::span<const PointId> centers);

/// Greedy 5r-covering lemma: balls by decreasing radius (ties: smaller
/// center id), keeping a ball when its member set misses every kept ball.
std::vector<Ball> vitali_subcover(std::span<const Ball> balls, const MetricMeasureSpace& space);

struct HausdorffEstimate {
  double upper = 0.0;       // sum 2r over the greedy cover
  double lower = 0.0;       // sum 2r / 5 over a Vitali subfamily of the cover
  double resolution = 0.0;  // cell radius r_min each sample point stands for
  std::vector<Ball> cover;
};

/// Finite-resolution spherical H^1_delta surrogate for E.
///
/// Each sample point represents an open cell of radius `resolution`; a ball
/// B(x, r) covers p when dist(x, p) + resolution <= r. Candidate balls are
/// centered in E with radius in [resolution, delta). The greedy repeatedly
/// takes the candidate with the most uncovered mass per unit radius (ties:
/// smaller center id, then smaller radius). A nonpositive `resolution`
/// selects half the largest nearest-neighbour spacing of E in the space.
HausdorffEstimate hausdorff_estimate(const MetricMeasureSpace& space, const TargetSet& e,
                                     double delta, double resolution = 0.0);

/// mu({x : dist(x, E) < delta}).
double neighborhood_mass(const MetricMeasureSpace& space, std::span<const PointId> e, double delta);

double diameter(const MetricMeasureSpace& space);

/// Geometric grid r_hi, r_hi/2, ... keeping every value >= r_lo.
std::vector<double> halving_grid(double r_lo, double r_hi);

}  // namespace rectilib
