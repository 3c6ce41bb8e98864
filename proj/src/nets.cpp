#include "rectilib/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rectilib/errors.hpp"
#include "rectilib/kernels.hpp"

namespace rectilib {

double NetHierarchy::scale(int n) const { return std::pow(rho, n); }

const std::vector<PointId>& NetHierarchy::level(int n) const {
  if (!has_level(n))
    throw ParameterError("net level " + std::to_string(n) + " outside [" + std::to_string(n_min) +
                         ", " + std::to_string(n_max) + "]");
  return levels[static_cast<std::size_t>(n - n_min)];
}

namespace {

std::vector<PointId> farthest_point_order(const MetricMeasureSpace& space, PointId start) {
  const std::size_t n = space.size();
  std::vector<PointId> order;
  order.reserve(n);
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  std::vector<char> used(n, 0);
  PointId next = start;
  for (std::size_t step = 0; step < n; ++step) {
    order.push_back(next);
    used[next] = 1;
    kernels::parallel::relax_distances(space, next, mind, 0);
    double best = -1.0;
    for (PointId q = 0; q < n; ++q)
      if (!used[q] && mind[q] > best) {
        best = mind[q];
        next = q;
      }
  }
  return order;
}

}  // namespace

NetHierarchy build_nets(const MetricMeasureSpace& space, double rho, int n_min, int n_max,
                        const NetOptions& options) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1)");
  if (n_min > n_max) throw ParameterError("n_min must not exceed n_max");
  for (PointId s : options.seeds) space.check_id(s);

  NetHierarchy h;
  h.rho = rho;
  h.n_min = n_min;
  h.n_max = n_max;
  const double diam = diameter(space);
  if (std::pow(rho, n_min) < diam)
    h.warnings.push_back("rho^n_min is below the space diameter; the coarsest level has several points");

  const std::size_t n = space.size();
  std::vector<PointId> order(n);
  if (options.order == ScanOrder::farthest_point)
    order = farthest_point_order(space, options.seeds.empty() ? 0 : options.seeds.front());
  else
    std::iota(order.begin(), order.end(), PointId{0});

  std::vector<char> member(n, 0);
  std::vector<PointId> current;
  for (PointId s : options.seeds) {
    if (member[s]) continue;
    for (PointId c : current)
      if (space.dist(s, c) < std::pow(rho, n_min))
        throw ParameterError("net seeds are not rho^n_min-separated");
    member[s] = 1;
    current.push_back(s);
  }

  for (int level = n_min; level <= n_max; ++level) {
    const double r = std::pow(rho, level);
    std::vector<double> mind = kernels::parallel::distance_to_set(space, current);
    const bool ascending = options.order == ScanOrder::ascending_id;
    for (PointId q : order) {
      if (member[q] || mind[q] < r) continue;
      member[q] = 1;
      current.push_back(q);
      kernels::parallel::relax_distances(space, q, mind, ascending ? q + 1 : 0);
    }
    std::vector<PointId> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    h.levels.push_back(std::move(sorted));
  }
  return h;
}

NetReport verify_nets(const NetHierarchy& h, const MetricMeasureSpace& space) {
  NetReport rep;
  for (int level = h.n_min; level <= h.n_max; ++level) {
    const auto& xs = h.level(level);
    const double r = h.scale(level);
    if (level > h.n_min && rep.nesting) {
      const auto& coarse = h.level(level - 1);
      for (PointId p : coarse)
        if (!std::binary_search(xs.begin(), xs.end(), p)) {
          rep.nesting = false;
          rep.nesting_witness = NetViolation{level, {p}, 0.0};
          break;
        }
    }
    for (std::size_t i = 0; i < xs.size() && rep.separation; ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        const double d = space.dist(xs[i], xs[j]);
        if (d < r) {
          rep.separation = false;
          rep.separation_witness = NetViolation{level, {xs[i], xs[j]}, d};
          break;
        }
      }
    if (rep.covering) {
      const auto mind = kernels::parallel::distance_to_set(space, xs);
      for (PointId p = 0; p < space.size(); ++p)
        if (!(mind[p] < r)) {
          rep.covering = false;
          rep.covering_witness = NetViolation{level, {p}, mind[p]};
          break;
        }
    }
  }
  return rep;
}

std::vector<std::size_t> packing_counts(const NetHierarchy& h, const MetricMeasureSpace& space) {
  std::vector<std::size_t> out;
  for (int level = h.n_min; level < h.n_max; ++level) {
    const double r = h.scale(level);
    std::size_t worst = 0;
    for (PointId x : h.level(level)) {
      std::size_t count = 0;
      for (PointId y : h.level(level + 1))
        if (space.dist(x, y) < r) ++count;
      worst = std::max(worst, count);
    }
    out.push_back(worst);
  }
  return out;
}

int coarsest_level(double rho, double diam) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1)");
  if (!(diam > 0.0)) return 0;
  int n = static_cast<int>(std::floor(std::log(diam) / std::log(rho)));
  // Strict: at rho^n == diam two points at full distance would both enter the net.
  while (std::pow(rho, n) <= diam) --n;
  while (std::pow(rho, n + 1) > diam) ++n;
  return n;
}

int saturation_level(const MetricMeasureSpace& space, double rho, int n_min, int max_levels) {
  std::vector<PointId> all(space.size());
  std::iota(all.begin(), all.end(), PointId{0});
  const auto nn = kernels::parallel::nearest_neighbor(space, all);
  double closest = std::numeric_limits<double>::infinity();
  for (double d : nn) closest = std::min(closest, d);
  int n = n_min;
  while (n < n_min + max_levels - 1 && std::pow(rho, n) > closest) ++n;
  return n;
}

}  // namespace rectilib
