#include <algorithm>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rectilib/kernels.hpp"

namespace rectilib::kernels {

int apply_thread_cap_from_env() {
  const char* raw = std::getenv("RECTILIB_THREADS");
  if (raw == nullptr) return 0;
  char* end = nullptr;
  const long cap = std::strtol(raw, &end, 10);
  if (end == raw || cap <= 0) return 0;
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(std::min<long>(cap, omp_get_num_procs())));
#endif
  return static_cast<int>(cap);
}

namespace parallel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
using Index = long long;  // OpenMP loop variables must be signed here
}  // namespace

std::vector<double> ball_masses(const MetricMeasureSpace& space, std::span<const PointId> centers,
                                std::span<const double> radii) {
  const std::size_t n = space.size();
  const std::size_t nr = radii.size();
  const Index nc = static_cast<Index>(centers.size());
  std::vector<double> out(centers.size() * nr, 0.0);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < nc; ++i) {
    double* row = out.data() + i * nr;
    const PointId c = centers[i];
    for (PointId q = 0; q < n; ++q) {
      const double d = space.dist(c, q);
      const double w = space.weight(q);
      for (std::size_t k = 0; k < nr; ++k)
        if (d < radii[k]) row[k] += w;
    }
  }
  return out;
}

std::vector<double> distance_to_set(const MetricMeasureSpace& space, std::span<const PointId> set) {
  const Index n = static_cast<Index>(space.size());
  std::vector<double> out(space.size(), kInf);
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < n; ++p) {
    double best = kInf;
    for (PointId s : set) best = std::min(best, space.dist(p, s));
    out[p] = best;
  }
  return out;
}

void relax_distances(const MetricMeasureSpace& space, PointId source, std::span<double> mind,
                     PointId from) {
  const Index n = static_cast<Index>(mind.size());
#pragma omp parallel for schedule(static)
  for (Index q = static_cast<Index>(from); q < n; ++q)
    mind[q] = std::min(mind[q], space.dist(source, q));
}

std::vector<double> distance_to_foreign(const MetricMeasureSpace& space,
                                        std::span<const PointId> centers,
                                        std::span<const std::size_t> owner) {
  const Index nc = static_cast<Index>(centers.size());
  const PointId n = space.size();
  std::vector<double> out(centers.size(), kInf);
#pragma omp parallel for schedule(dynamic, 16)
  for (Index i = 0; i < nc; ++i) {
    double best = kInf;
    for (PointId q = 0; q < n; ++q)
      if (owner[q] != static_cast<std::size_t>(i)) best = std::min(best, space.dist(centers[i], q));
    out[i] = best;
  }
  return out;
}

std::vector<double> nearest_neighbor(const MetricMeasureSpace& space,
                                     std::span<const PointId> subset) {
  const Index ns = static_cast<Index>(subset.size());
  const PointId n = space.size();
  std::vector<double> out(subset.size(), kInf);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < ns; ++i) {
    double best = kInf;
    for (PointId q = 0; q < n; ++q)
      if (q != subset[i]) best = std::min(best, space.dist(subset[i], q));
    out[i] = best;
  }
  return out;
}

std::vector<PointId> nearest_member(const MetricMeasureSpace& space,
                                    std::span<const PointId> queries,
                                    std::span<const PointId> set) {
  const Index nq = static_cast<Index>(queries.size());
  std::vector<PointId> out(queries.size(), 0);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < nq; ++i) {
    double best = kInf;
    PointId arg = 0;
    for (PointId s : set) {
      const double d = space.dist(queries[i], s);
      if (d < best) {
        best = d;
        arg = s;
      }
    }
    out[i] = arg;
  }
  return out;
}

double diameter(const MetricMeasureSpace& space) {
  const Index n = static_cast<Index>(space.size());
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 32) reduction(max : best)
  for (Index p = 0; p < n; ++p)
    for (Index q = p + 1; q < n; ++q) best = std::max(best, space.dist(p, q));
  return best;
}

}  // namespace parallel
}  // namespace rectilib::kernels
