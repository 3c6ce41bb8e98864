#include <algorithm>
#include <limits>

#include "rectilib/kernels.hpp"

namespace rectilib::kernels::serial {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> ball_masses(const MetricMeasureSpace& space, std::span<const PointId> centers,
                                std::span<const double> radii) {
  const std::size_t n = space.size();
  const std::size_t nr = radii.size();
  std::vector<double> out(centers.size() * nr, 0.0);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    double* row = out.data() + i * nr;
    for (PointId q = 0; q < n; ++q) {
      const double d = space.dist(centers[i], q);
      const double w = space.weight(q);
      for (std::size_t k = 0; k < nr; ++k)
        if (d < radii[k]) row[k] += w;
    }
  }
  return out;
}

std::vector<double> distance_to_set(const MetricMeasureSpace& space, std::span<const PointId> set) {
  std::vector<double> out(space.size(), kInf);
  for (PointId p = 0; p < space.size(); ++p)
    for (PointId s : set) out[p] = std::min(out[p], space.dist(p, s));
  return out;
}

void relax_distances(const MetricMeasureSpace& space, PointId source, std::span<double> mind,
                     PointId from) {
  for (PointId q = from; q < mind.size(); ++q) mind[q] = std::min(mind[q], space.dist(source, q));
}

std::vector<double> distance_to_foreign(const MetricMeasureSpace& space,
                                        std::span<const PointId> centers,
                                        std::span<const std::size_t> owner) {
  std::vector<double> out(centers.size(), kInf);
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (PointId q = 0; q < space.size(); ++q)
      if (owner[q] != i) out[i] = std::min(out[i], space.dist(centers[i], q));
  return out;
}

std::vector<double> nearest_neighbor(const MetricMeasureSpace& space,
                                     std::span<const PointId> subset) {
  std::vector<double> out(subset.size(), kInf);
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (PointId q = 0; q < space.size(); ++q)
      if (q != subset[i]) out[i] = std::min(out[i], space.dist(subset[i], q));
  return out;
}

std::vector<PointId> nearest_member(const MetricMeasureSpace& space,
                                    std::span<const PointId> queries,
                                    std::span<const PointId> set) {
  std::vector<PointId> out(queries.size(), 0);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    double best = kInf;
    for (PointId s : set) {
      const double d = space.dist(queries[i], s);
      if (d < best) {
        best = d;
        out[i] = s;
      }
    }
  }
  return out;
}

double diameter(const MetricMeasureSpace& space) {
  double best = 0.0;
  for (PointId p = 0; p < space.size(); ++p)
    for (PointId q = p + 1; q < space.size(); ++q) best = std::max(best, space.dist(p, q));
  return best;
}

}  // namespace rectilib::kernels::serial
