#pragma once

// Data-parallel inner loops. Every kernel exists twice with one signature:
// `serial::` is the plain reference loop kept for testing and `parallel::` is
// the OpenMP version the library calls. Per-output accumulation order is the
// same in both, so results are bit-identical.

#include <span>
#include <vector>

#include "rectilib/space.hpp"

namespace rectilib::kernels {

/// Caps OpenMP parallelism from RECTILIB_THREADS when set. Returns the cap
/// applied, or 0 when the variable is absent or invalid.
int apply_thread_cap_from_env();

namespace serial {

/// masses[i * radii.size() + k] = mu(B(centers[i], radii[k])).
std::vector<double> ball_masses(const MetricMeasureSpace& space, std::span<const PointId> centers,
                                std::span<const double> radii);

/// out[p] = min over s in `set` of dist(p, s); +inf for an empty set.
std::vector<double> distance_to_set(const MetricMeasureSpace& space, std::span<const PointId> set);

/// mind[q] = min(mind[q], dist(source, q)) for q >= from.
void relax_distances(const MetricMeasureSpace& space, PointId source, std::span<double> mind,
                     PointId from);

/// out[i] = min dist(centers[i], p) over points p with owner[p] != i; +inf if none.
std::vector<double> distance_to_foreign(const MetricMeasureSpace& space,
                                        std::span<const PointId> centers,
                                        std::span<const std::size_t> owner);

/// out[i] = distance from subset[i] to the nearest other point; +inf for a singleton space.
std::vector<double> nearest_neighbor(const MetricMeasureSpace& space,
                                     std::span<const PointId> subset);

/// out[i] = element of `set` nearest to queries[i]; ties go to the smaller
/// point id (`set` must be sorted ascending and nonempty).
std::vector<PointId> nearest_member(const MetricMeasureSpace& space,
                                    std::span<const PointId> queries,
                                    std::span<const PointId> set);

double diameter(const MetricMeasureSpace& space);

}  // namespace serial

namespace parallel {

// Same contracts as serial::.
std::vector<double> ball_masses(const MetricMeasureSpace& space, std::span<const PointId> centers,
                                std::span<const double> radii);

std::vector<double> distance_to_set(const MetricMeasureSpace& space, std::span<const PointId> set);

void relax_distances(const MetricMeasureSpace& space, PointId source, std::span<double> mind,
                     PointId from);

std::vector<double> distance_to_foreign(const MetricMeasureSpace& space,
                                        std::span<const PointId> centers,
                                        std::span<const std::size_t> owner);

std::vector<double> nearest_neighbor(const MetricMeasureSpace& space,
                                     std::span<const PointId> subset);

std::vector<PointId> nearest_member(const MetricMeasureSpace& space,
                                    std::span<const PointId> queries,
                                    std::span<const PointId> set);

double diameter(const MetricMeasureSpace& space);

}  // namespace parallel

}  // namespace rectilib::kernels
