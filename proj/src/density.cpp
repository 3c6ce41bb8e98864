#include "rectilib/density.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rectilib/errors.hpp"
#include "rectilib/kernels.hpp"

namespace rectilib {

DensityProfile density_profile(const MetricMeasureSpace& space, PointId x, double r_lo, double r_hi) {
  const PointId one[] = {x};
  return density_profiles(space, one, r_lo, r_hi).front();
}

std::vector<DensityProfile> density_profiles(const MetricMeasureSpace& space,
                                             std::span<const PointId> points, double r_lo,
                                             double r_hi) {
  for (PointId p : points) space.check_id(p);
  const auto radii = halving_grid(r_lo, r_hi);
  const auto masses = kernels::parallel::ball_masses(space, points, radii);
  std::vector<DensityProfile> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    DensityProfile& prof = out[i];
    prof.point = points[i];
    prof.radii = radii;
    prof.values.resize(radii.size());
    prof.lower_estimate = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < radii.size(); ++k) {
      prof.values[k] = masses[i * radii.size() + k] / radii[k];
      prof.lower_estimate = std::min(prof.lower_estimate, prof.values[k]);
    }
  }
  return out;
}

std::vector<PointId> stratify(const MetricMeasureSpace& space, const TargetSet& e, int j, int k,
                              double r_lo, double r_hi) {
  if (j < 1 || k < 1) throw ParameterError("stratify needs j, k >= 1");
  std::vector<double> radii;
  for (double r : halving_grid(r_lo, r_hi))
    if (r < 1.0 / k) radii.push_back(r);
  if (radii.empty()) return e.members;
  const auto masses = kernels::parallel::ball_masses(space, e.members, radii);
  std::vector<PointId> out;
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    bool keep = true;
    for (std::size_t q = 0; q < radii.size() && keep; ++q)
      keep = masses[i * radii.size() + q] >= radii[q] / j;
    if (keep) out.push_back(e.members[i]);
  }
  return out;
}

std::vector<std::vector<PointId>> split_by_diameter(const MetricMeasureSpace& space,
                                                    std::span<const PointId> s, double bound) {
  if (!(bound > 0.0)) throw ParameterError("split_by_diameter needs a positive bound");
  std::vector<PointId> pending(s.begin(), s.end());
  for (PointId p : pending) space.check_id(p);
  std::sort(pending.begin(), pending.end());
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());

  std::vector<std::vector<PointId>> pieces;
  while (!pending.empty()) {
    const PointId seed = pending.front();
    std::vector<PointId> piece, rest;
    for (PointId p : pending) (space.dist(seed, p) < bound / 2 ? piece : rest).push_back(p);
    pieces.push_back(std::move(piece));
    pending = std::move(rest);
  }
  return pieces;
}

Beta2Result beta2(const MetricMeasureSpace& space, std::span<const PointId> a) {
  if (!space.has_coords()) throw UnsupportedMetricError("beta2 needs Euclidean coordinates");
  if (a.size() < 2) throw ParameterError("beta2 needs at least two points");
  for (PointId p : a) space.check_id(p);

  const std::size_t d = space.dim();
  Beta2Result res;
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (PointId p : a) {
    const auto x = space.coords(p);
    res.mass += space.weight(p);
    for (std::size_t i = 0; i < d; ++i) centroid[i] += space.weight(p) * x[i];
  }
  if (!(res.mass > 0.0)) throw DegenerateError("beta2 needs mu(A) > 0");
  centroid /= res.mass;

  Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(d, d);
  for (PointId p : a) {
    const auto x = space.coords(p);
    Eigen::VectorXd y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] - centroid[i];
    moment += space.weight(p) * y * y.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(moment);
  Eigen::VectorXd u = eig.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);
  for (std::size_t i = 0; i < d; ++i)
    if (u[i] != 0.0) {
      if (u[i] < 0.0) u = -u;
      break;
    }
  u.normalize();

  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      res.diameter = std::max(res.diameter, space.dist(a[i], a[j]));

  double residual = 0.0;
  for (PointId p : a) {
    const auto x = space.coords(p);
    Eigen::VectorXd y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] - centroid[i];
    // Subtract the projection first; |y|^2 - (y.u)^2 cancels badly near zero.
    residual += space.weight(p) * (y - y.dot(u) * u).squaredNorm();
  }
  res.point.assign(centroid.data(), centroid.data() + d);
  res.direction.assign(u.data(), u.data() + d);
  if (res.diameter > 0.0)
    res.beta2 = std::min(1.0, std::sqrt(residual / res.mass) / res.diameter);
  return res;
}

BsSum bs_sum(const MetricMeasureSpace& space, PointId x, int depth) {
  if (!space.has_coords()) throw UnsupportedMetricError("bs_sum needs Euclidean coordinates");
  if (depth < 1) throw ParameterError("bs_sum needs depth >= 1");
  space.check_id(x);
  const std::size_t d = space.dim();
  const auto cx = space.coords(x);
  BsSum out;
  for (int m = 0; m <= depth; ++m) {
    const double side = std::ldexp(1.0, -m);
    double mass = 0.0;
    for (PointId q = 0; q < space.size(); ++q) {
      const auto cq = space.coords(q);
      bool inside = true;
      for (std::size_t i = 0; i < d && inside; ++i)
        inside = std::floor(cq[i] / side) == std::floor(cx[i] / side);
      if (inside) mass += space.weight(q);
    }
    if (mass <= 0.0) {
      ++out.skipped;
      out.terms.push_back(0.0);
      continue;
    }
    const double term = std::sqrt(static_cast<double>(d)) * side / mass;
    out.terms.push_back(term);
    out.sum += term;
  }
  return out;
}

LowerMassCheck lower_mass_check(const MetricMeasureSpace& space, std::span<const PointId> points,
                                std::span<const double> radii) {
  LowerMassCheck out;
  const auto masses = kernels::parallel::ball_masses(space, points, radii);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = 0; k < radii.size(); ++k) {
      ++out.checked;
      const double m = masses[i * radii.size() + k];
      if (m < 2.0 * radii[k] && out.ok) {
        out.ok = false;
        out.witness = points[i];
        out.radius = radii[k];
        out.mass = m;
      }
    }
  return out;
}

}  // namespace rectilib
