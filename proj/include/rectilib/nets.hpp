#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rectilib/space.hpp"

namespace rectilib {

/// Nested maximal rho^n-nets X_{n_min} ⊆ ... ⊆ X_{n_max}.
struct NetHierarchy {
  double rho = 0.5;
  int n_min = 0;
  int n_max = 0;
  std::vector<std::vector<PointId>> levels;  // levels[n - n_min], sorted ascending
  std::vector<std::string> warnings;

  /// rho^n.
  double scale(int n) const;
  const std::vector<PointId>& level(int n) const;
  bool has_level(int n) const noexcept { return n >= n_min && n <= n_max; }
  int level_count() const noexcept { return n_max - n_min + 1; }
};

enum class ScanOrder { ascending_id, farthest_point };

struct NetOptions {
  /// Points forced into X_{n_min}; must be rho^{n_min}-separated.
  std::vector<PointId> seeds;
  ScanOrder order = ScanOrder::ascending_id;
};

/// Level by level from coarse to fine: start from the previous level (or the
/// seeds), then scan the remaining points and admit any point at distance
/// >= rho^n from every current member. Separation is >= rho^n and covering is
/// < rho^n. Deterministic.
NetHierarchy build_nets(const MetricMeasureSpace& space, double rho, int n_min, int n_max,
                        const NetOptions& options = {});

struct NetViolation {
  int level = 0;
  std::vector<PointId> points;
  double distance = 0.0;
};

struct NetReport {
  bool nesting = true;
  bool separation = true;
  bool covering = true;
  std::optional<NetViolation> nesting_witness;
  std::optional<NetViolation> separation_witness;
  std::optional<NetViolation> covering_witness;

  bool ok() const noexcept { return nesting && separation && covering; }
};

NetReport verify_nets(const NetHierarchy& h, const MetricMeasureSpace& space);

/// For each level n < n_max: max over x in X_n of |X_{n+1} ∩ B(x, rho^n)|.
std::vector<std::size_t> packing_counts(const NetHierarchy& h, const MetricMeasureSpace& space);

/// Largest n with rho^n > diam (the coarsest level that is a single point).
int coarsest_level(double rho, double diam);

/// First level >= n_min at which a maximal rho^n-net would keep every point
/// (rho^n <= smallest interpoint distance), capped at n_min + max_levels - 1.
int saturation_level(const MetricMeasureSpace& space, double rho, int n_min, int max_levels = 16);

}  // namespace rectilib
