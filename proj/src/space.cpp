#include "rectilib/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <tuple>

#include "rectilib/errors.hpp"
#include "rectilib/kernels.hpp"

namespace rectilib {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MetricMeasureSpace MetricMeasureSpace::from_coords(std::size_t dim, std::vector<double> coords,
                                                   std::vector<double> weights,
                                                   std::vector<std::string> labels) {
  if (dim == 0) throw InputError("coordinate dimension must be positive");
  if (coords.size() != weights.size() * dim)
    throw InputError("coordinate array does not match point count times dimension");
  for (double c : coords)
    if (!std::isfinite(c)) throw InputError("non-finite coordinate");
  MetricMeasureSpace s;
  s.dim_ = dim;
  s.coords_ = std::move(coords);
  s.weights_ = std::move(weights);
  s.finish(std::move(labels));
  return s;
}

MetricMeasureSpace MetricMeasureSpace::from_matrix(std::vector<double> matrix,
                                                   std::vector<double> weights,
                                                   std::vector<std::string> labels,
                                                   std::size_t triangle_samples,
                                                   std::uint64_t seed) {
  const std::size_t n = weights.size();
  if (matrix.size() != n * n) throw InputError("distance matrix is not n x n for n weights");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i] != 0.0) throw InputError("distance matrix has a nonzero diagonal entry");
    for (std::size_t j = 0; j < n; ++j) {
      const double d = matrix[i * n + j];
      if (!std::isfinite(d) || d < 0.0) throw InputError("distance matrix has a negative or non-finite entry");
      if (d != matrix[j * n + i]) throw InputError("distance matrix is not symmetric");
    }
  }
  MetricMeasureSpace s;
  s.matrix_ = std::move(matrix);
  s.weights_ = std::move(weights);
  s.finish(std::move(labels));
  double scale = 0.0;
  for (double d : s.matrix_) scale = std::max(scale, d);
  if (triangle_defect(s, triangle_samples, seed) > 1e-12 * std::max(1.0, scale))
    throw InputError("distance matrix violates the triangle inequality");
  return s;
}

void MetricMeasureSpace::finish(std::vector<std::string> labels) {
  const std::size_t n = weights_.size();
  if (n == 0) throw InputError("space has no points");
  for (double w : weights_)
    if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and nonnegative");
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!(total_mass_ > 0.0)) throw DegenerateError("total mass must be positive");
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw InputError("label count does not match point count");
  labels_ = std::move(labels);
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!index_.emplace(labels_[i], i).second) throw InputError("duplicate point id '" + labels_[i] + "'");
}

PointId MetricMeasureSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) throw IdentifierError("unknown point id '" + std::string(label) + "'");
  return it->second;
}

void MetricMeasureSpace::check_id(PointId p) const {
  if (p >= size())
    throw IdentifierError("point index " + std::to_string(p) + " out of range (size " +
                          std::to_string(size()) + ")");
}

double triangle_defect(const MetricMeasureSpace& space, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = space.size();
  if (n < 3) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, n - 1);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const PointId a = pick(rng), b = pick(rng), c = pick(rng);
    worst = std::max(worst, space.dist(a, c) - space.dist(a, b) - space.dist(b, c));
  }
  return worst;
}

TargetSet make_target(const MetricMeasureSpace& space, std::vector<PointId> members,
                      std::optional<PointId> xi0) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw ParameterError("target set must be nonempty");
  for (PointId p : members) space.check_id(p);

  auto radius_from = [&](PointId c) {
    double r = 0.0;
    for (PointId p : members) r = std::max(r, space.dist(c, p));
    return r;
  };
  PointId center = members.front();
  double radius = kInf;
  if (xi0) {
    space.check_id(*xi0);
    center = *xi0;
    radius = radius_from(center);
  } else {
    for (PointId c : members) {
      const double r = radius_from(c);
      if (r < radius) {
        radius = r;
        center = c;
      }
    }
  }
  TargetSet e;
  e.members = std::move(members);
  e.xi0 = center;
  e.r0 = radius > 0.0 ? 2.0 * radius * (1.0 + 1e-9) : 1.0;
  return e;
}

void validate_target(const MetricMeasureSpace& space, const TargetSet& e) {
  if (e.members.empty()) throw ParameterError("target set must be nonempty");
  if (!(e.r0 > 0.0)) throw ParameterError("target set needs r0 > 0");
  space.check_id(e.xi0);
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    space.check_id(e.members[i]);
    if (i > 0 && e.members[i] <= e.members[i - 1])
      throw ParameterError("target members must be sorted and unique");
    if (!(space.dist(e.xi0, e.members[i]) < e.r0 / 2))
      throw ParameterError("target member " + space.label(e.members[i]) +
                           " lies outside B(xi0, r0/2)");
  }
}

double ball_mass(const MetricMeasureSpace& space, const Ball& b) {
  space.check_id(b.center);
  if (!(b.radius > 0.0)) throw ParameterError("ball radius must be positive");
  double m = 0.0;
  for (PointId q = 0; q < space.size(); ++q)
    if (space.dist(b.center, q) < b.radius) m += space.weight(q);
  return m;
}

DoublingEstimate doubling_estimate(const MetricMeasureSpace& space, std::span<const double> radii,
                                   std::span<const PointId> centers) {
  for (double r : radii)
    if (!(r > 0.0)) throw ParameterError("doubling radii must be positive");
  for (PointId c : centers) space.check_id(c);

  std::vector<double> both(radii.begin(), radii.end());
  for (double r : radii) both.push_back(2.0 * r);
  const auto masses = kernels::parallel::ball_masses(space, centers, both);

  DoublingEstimate est;
  const std::size_t nr = radii.size();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t k = 0; k < nr; ++k) {
      const double inner = masses[i * 2 * nr + k];
      const double outer = masses[i * 2 * nr + nr + k];
      if (inner <= 0.0) {
        ++est.skipped;
        continue;
      }
      ++est.evaluated;
      const double ratio = outer / inner;
      if (ratio > est.c_hat) {
        est.c_hat = ratio;
        est.worst_center = centers[i];
        est.worst_radius = radii[k];
      }
    }
  }
  if (est.evaluated == 0) throw DegenerateError("every (center, radius) pair has zero inner mass");
  return est;
}

std::vector<Ball> vitali_subcover(std::span<const Ball> balls, const MetricMeasureSpace& space) {
  for (const Ball& b : balls) space.check_id(b.center);
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    return balls[a].center < balls[b].center;
  });

  std::vector<char> taken(space.size(), 0);
  std::vector<PointId> members;
  std::vector<Ball> selected;
  for (std::size_t idx : order) {
    const Ball& b = balls[idx];
    members.clear();
    bool disjoint = true;
    for (PointId q = 0; q < space.size() && disjoint; ++q) {
      if (space.dist(b.center, q) < b.radius) {
        if (taken[q]) disjoint = false;
        members.push_back(q);
      }
    }
    if (!disjoint) continue;
    for (PointId q : members) taken[q] = 1;
    selected.push_back(b);
  }
  return selected;
}

namespace {

// One center's neighbours in E sorted by distance; candidate k covers the
// prefix ending at group end k.
struct CenterList {
  PointId center;
  std::vector<std::pair<double, PointId>> near;
  std::vector<std::size_t> group_end;  // exclusive prefix ends of equal-distance groups
};

struct Candidate {
  double score;
  std::size_t list;
  std::size_t group;
};

}  // namespace

HausdorffEstimate hausdorff_estimate(const MetricMeasureSpace& space, const TargetSet& e,
                                     double delta, double resolution) {
  if (!(delta > 0.0)) throw ParameterError("hausdorff_estimate needs delta > 0");
  validate_target(space, e);
  if (!(resolution > 0.0)) {
    const auto nn = kernels::parallel::nearest_neighbor(space, e.members);
    double widest = 0.0;
    for (double d : nn)
      if (std::isfinite(d)) widest = std::max(widest, d);
    if (widest == 0.0)
      throw ParameterError("cannot infer a resolution for a one-point space; pass one explicitly");
    resolution = widest / 2.0;
  }
  if (!(resolution < delta)) throw ParameterError("hausdorff_estimate needs resolution < delta");

  const std::size_t ne = e.members.size();
  std::vector<std::size_t> slot(space.size(), ne);
  for (std::size_t i = 0; i < ne; ++i) slot[e.members[i]] = i;

  std::vector<CenterList> lists(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    CenterList& cl = lists[i];
    cl.center = e.members[i];
    for (PointId p : e.members) {
      const double d = space.dist(cl.center, p);
      if (d + resolution < delta) cl.near.emplace_back(d, p);
    }
    std::sort(cl.near.begin(), cl.near.end());
    for (std::size_t k = 0; k < cl.near.size(); ++k)
      if (k + 1 == cl.near.size() || cl.near[k + 1].first != cl.near[k].first)
        cl.group_end.push_back(k + 1);
  }

  std::vector<char> covered(ne, 0);
  auto radius_of = [&](const Candidate& c) {
    return lists[c.list].near[lists[c.list].group_end[c.group] - 1].first + resolution;
  };
  auto score_of = [&](const Candidate& c) {
    const CenterList& cl = lists[c.list];
    double m = 0.0;
    for (std::size_t k = 0; k < cl.group_end[c.group]; ++k)
      if (!covered[slot[cl.near[k].second]]) m += space.weight(cl.near[k].second);
    return m / radius_of(c);
  };
  // Max-heap order: larger score, then smaller center, then smaller radius.
  auto before = [&](const Candidate& a, const Candidate& b) {
    return std::make_tuple(a.score, -static_cast<double>(lists[a.list].center), -radius_of(a)) <
           std::make_tuple(b.score, -static_cast<double>(lists[b.list].center), -radius_of(b));
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(before)> heap(before);
  for (std::size_t i = 0; i < ne; ++i) {
    const CenterList& cl = lists[i];
    double prefix = 0.0;
    std::size_t k = 0;
    for (std::size_t g = 0; g < cl.group_end.size(); ++g) {
      for (; k < cl.group_end[g]; ++k) prefix += space.weight(cl.near[k].second);
      Candidate c{0.0, i, g};
      c.score = prefix / radius_of(c);
      if (c.score > 0.0) heap.push(c);
    }
  }

  HausdorffEstimate out;
  out.resolution = resolution;
  std::size_t remaining = ne;
  while (remaining > 0 && !heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    top.score = score_of(top);
    if (top.score <= 0.0) continue;
    if (!heap.empty() && before(top, heap.top())) {
      heap.push(top);
      continue;
    }
    const CenterList& cl = lists[top.list];
    for (std::size_t k = 0; k < cl.group_end[top.group]; ++k) {
      char& flag = covered[slot[cl.near[k].second]];
      if (!flag) {
        flag = 1;
        --remaining;
      }
    }
    out.cover.push_back(Ball{cl.center, radius_of(top)});
  }
  // Zero-weight leftovers get a minimal ball each.
  for (std::size_t i = 0; i < ne; ++i)
    if (!covered[i]) out.cover.push_back(Ball{e.members[i], resolution});

  for (const Ball& b : out.cover) out.upper += 2.0 * b.radius;
  for (const Ball& b : vitali_subcover(out.cover, space)) out.lower += 2.0 * b.radius / 5.0;
  return out;
}

double neighborhood_mass(const MetricMeasureSpace& space, std::span<const PointId> e, double delta) {
  const auto d = kernels::parallel::distance_to_set(space, e);
  double m = 0.0;
  for (PointId p = 0; p < space.size(); ++p)
    if (d[p] < delta) m += space.weight(p);
  return m;
}

double diameter(const MetricMeasureSpace& space) { return kernels::parallel::diameter(space); }

std::vector<double> halving_grid(double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_lo < r_hi)) throw ParameterError("radius grid needs 0 < r_lo < r_hi");
  std::vector<double> grid;
  for (double r = r_hi; r >= r_lo; r /= 2.0) grid.push_back(r);
  return grid;
}

}  // namespace rectilib
