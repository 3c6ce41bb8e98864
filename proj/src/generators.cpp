#include "rectilib/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rectilib/errors.hpp"

namespace rectilib {

namespace {

constexpr double kPi = std::numbers::pi;

void require_resolution(const GeneratorSpec& spec, int lo, int hi) {
  if (spec.resolution < lo || spec.resolution > hi)
    throw ParameterError(to_string(spec.kind) + " resolution must be in [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "], got " + std::to_string(spec.resolution));
}

std::vector<PointId> all_points(std::size_t n) {
  std::vector<PointId> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

Generated finish(MetricMeasureSpace space, std::vector<PointId> members) {
  if (members.empty()) throw ParameterError("generator parameters leave the target set empty");
  Generated g{std::move(space), {}};
  g.target = make_target(g.space, std::move(members));
  return g;
}

Generated interval(const GeneratorSpec& spec) {
  require_resolution(spec, 2, 1 << 24);
  const std::size_t n = static_cast<std::size_t>(spec.resolution);
  std::vector<double> xs(n), w(n, 2.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  const double lo = spec.param("e_lo", 0.25), hi = spec.param("e_hi", 0.75);
  std::vector<double> holes;
  if (auto it = spec.params.find("holes"); it != spec.params.end()) holes = it->second;
  if (holes.size() % 2 != 0) throw ParameterError("interval holes need (a, b) pairs");
  std::vector<PointId> members;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i];
    if (x < lo || x > hi) continue;
    bool in_hole = false;
    for (std::size_t h = 0; h < holes.size(); h += 2) in_hole |= holes[h] < x && x < holes[h + 1];
    if (!in_hole) members.push_back(i);
  }
  return finish(MetricMeasureSpace::from_coords(1, std::move(xs), std::move(w)), std::move(members));
}

Generated circle(const GeneratorSpec& spec) {
  require_resolution(spec, 2, 1 << 24);
  const std::size_t n = static_cast<std::size_t>(spec.resolution);
  const double dn = static_cast<double>(n);
  const double weight = spec.param("mu_r", 0.0) != 0.0 ? 4.0 * std::sin(kPi / dn) : 2.0 * kPi / dn;
  std::vector<double> xy(2 * n), w(n, weight);
  const double lo = spec.param("arc_lo", 0.0), hi = spec.param("arc_hi", kPi / 2.0);
  std::vector<PointId> members;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * static_cast<double>(i) / dn;
    xy[2 * i] = std::cos(th);
    xy[2 * i + 1] = std::sin(th);
    if (th >= lo && th <= hi) members.push_back(i);
  }
  return finish(MetricMeasureSpace::from_coords(2, std::move(xy), std::move(w)), std::move(members));
}

Generated grid2d(const GeneratorSpec& spec) {
  require_resolution(spec, 2, 1 << 12);
  const std::size_t m = static_cast<std::size_t>(spec.resolution);
  const double dm = static_cast<double>(m);
  std::vector<double> xy;
  xy.reserve(2 * m * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      xy.push_back((static_cast<double>(i) + 0.5) / dm);
      xy.push_back((static_cast<double>(j) + 0.5) / dm);
    }
  std::vector<double> w(m * m, 1.0 / (dm * dm));
  return finish(MetricMeasureSpace::from_coords(2, std::move(xy), std::move(w)), all_points(m * m));
}

Generated cantor4(const GeneratorSpec& spec) {
  require_resolution(spec, 1, 10);
  const int levels = spec.resolution;
  const std::size_t n = std::size_t{1} << (2 * levels);
  const double scale = 1.0 / (1.0 - std::pow(0.25, levels));
  std::vector<double> xy(2 * n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    double x = 0.0, y = 0.0, step = 0.75;
    for (int k = 0; k < levels; ++k) {
      const std::size_t q = (idx >> (2 * (levels - 1 - k))) & 3u;
      x += static_cast<double>(q & 1u) * step;
      y += static_cast<double>(q >> 1) * step;
      step *= 0.25;
    }
    xy[2 * idx] = x * scale;
    xy[2 * idx + 1] = y * scale;
  }
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return finish(MetricMeasureSpace::from_coords(2, std::move(xy), std::move(w)), all_points(n));
}

Generated koch(const GeneratorSpec& spec) {
  require_resolution(spec, 1, 10);
  const auto v = koch_vertices(spec.resolution);
  const std::size_t edges = v.size() / 2 - 1;
  std::vector<double> xy(2 * edges);
  for (std::size_t e = 0; e < edges; ++e) {
    xy[2 * e] = 0.5 * (v[2 * e] + v[2 * e + 2]);
    xy[2 * e + 1] = 0.5 * (v[2 * e + 1] + v[2 * e + 3]);
  }
  std::vector<double> w(edges, 1.0 / static_cast<double>(edges));
  return finish(MetricMeasureSpace::from_coords(2, std::move(xy), std::move(w)), all_points(edges));
}

Generated cascade(const GeneratorSpec& spec) {
  require_resolution(spec, 1, 11);
  std::vector<double> ratios{0.3, 0.2, 0.3, 0.2};
  if (auto it = spec.params.find("ratios"); it != spec.params.end()) ratios = it->second;
  if (ratios.size() != 4) throw ParameterError("cascade needs exactly four ratios");
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("cascade ratios must be positive");
    total += r;
  }
  for (double& r : ratios) r /= total;

  const int depth = spec.resolution;
  const std::size_t side = std::size_t{1} << depth;
  const std::size_t n = side * side;
  std::vector<double> xy(2 * n), w(n);
  for (std::size_t j = 0; j < side; ++j)
    for (std::size_t i = 0; i < side; ++i) {
      const std::size_t p = j * side + i;
      double m = 1.0;
      for (int k = depth - 1; k >= 0; --k) m *= ratios[((i >> k) & 1u) | (((j >> k) & 1u) << 1)];
      xy[2 * p] = (static_cast<double>(i) + 0.5) / static_cast<double>(side);
      xy[2 * p + 1] = (static_cast<double>(j) + 0.5) / static_cast<double>(side);
      w[p] = m;
    }
  return finish(MetricMeasureSpace::from_coords(2, std::move(xy), std::move(w)), all_points(n));
}

Generated lipschitz_curve(const GeneratorSpec& spec) {
  require_resolution(spec, 2, 1 << 24);
  std::vector<double> poly{0.0, 0.0, 1.0, 0.0};
  if (auto it = spec.params.find("polyline"); it != spec.params.end()) poly = it->second;
  if (poly.size() < 4 || poly.size() % 2 != 0)
    throw ParameterError("polyline needs at least two (x, y) vertices");
  const double coils = spec.param("coils", 1.0);
  const double mass = spec.param("mass", 1.0);
  if (coils < 1.0 || coils != std::floor(coils)) throw ParameterError("coils must be a positive integer");
  if (!(mass > 0.0)) throw ParameterError("mass must be positive");

  const std::size_t nv = poly.size() / 2;
  std::vector<double> cum(nv, 0.0);
  for (std::size_t k = 1; k < nv; ++k)
    cum[k] = cum[k - 1] + std::hypot(poly[2 * k] - poly[2 * k - 2], poly[2 * k + 1] - poly[2 * k - 1]);
  if (!(cum.back() > 0.0)) throw ParameterError("polyline has zero length");

  const std::size_t n = static_cast<std::size_t>(spec.resolution);
  std::vector<double> xy(2 * n), w(n, mass / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * coils;
    const double whole = std::floor(u);
    double s = u - whole;
    if (static_cast<long long>(whole) % 2 == 1) s = 1.0 - s;
    const double target = s * cum.back();
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
    k = std::clamp<std::size_t>(k, 1, nv - 1);
    const double seg = cum[k] - cum[k - 1];
    const double f = seg > 0.0 ? (target - cum[k - 1]) / seg : 0.0;
    xy[2 * i] = poly[2 * k - 2] + f * (poly[2 * k] - poly[2 * k - 2]);
    xy[2 * i + 1] = poly[2 * k - 1] + f * (poly[2 * k + 1] - poly[2 * k - 1]);
  }
  return finish(MetricMeasureSpace::from_coords(2, std::move(xy), std::move(w)), all_points(n));
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::interval: return "interval";
    case GeneratorKind::circle: return "circle";
    case GeneratorKind::grid2d: return "grid2d";
    case GeneratorKind::cantor4: return "cantor4";
    case GeneratorKind::koch: return "koch";
    case GeneratorKind::cascade: return "cascade";
    case GeneratorKind::lipschitz_curve: return "lipschitz_curve";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  for (GeneratorKind k : {GeneratorKind::interval, GeneratorKind::circle, GeneratorKind::grid2d,
                          GeneratorKind::cantor4, GeneratorKind::koch, GeneratorKind::cascade,
                          GeneratorKind::lipschitz_curve})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown generator kind '" + name + "'");
}

double GeneratorSpec::param(const std::string& name, double fallback) const {
  auto it = params.find(name);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) throw ParameterError("parameter '" + name + "' must be a single number");
  return it->second.front();
}

std::vector<double> koch_vertices(int level) {
  if (level < 0) throw ParameterError("koch level must be nonnegative");
  std::vector<double> v{0.0, 0.0, 1.0, 0.0};
  const double c = 0.5, s = std::sqrt(3.0) / 2.0;
  for (int l = 0; l < level; ++l) {
    std::vector<double> next;
    next.reserve(4 * v.size());
    for (std::size_t k = 0; k + 3 < v.size(); k += 2) {
      const double ax = v[k], ay = v[k + 1], bx = v[k + 2], by = v[k + 3];
      const double dx = (bx - ax) / 3.0, dy = (by - ay) / 3.0;
      const double px = ax + dx, py = ay + dy;
      const double qx = ax + 2.0 * dx, qy = ay + 2.0 * dy;
      // Peak: the middle third rotated by +60 degrees about its start.
      const double tx = px + c * dx - s * dy, ty = py + s * dx + c * dy;
      next.insert(next.end(), {ax, ay, px, py, tx, ty, qx, qy});
    }
    next.push_back(v[v.size() - 2]);
    next.push_back(v.back());
    v = std::move(next);
  }
  return v;
}

Generated generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::interval: return interval(spec);
    case GeneratorKind::circle: return circle(spec);
    case GeneratorKind::grid2d: return grid2d(spec);
    case GeneratorKind::cantor4: return cantor4(spec);
    case GeneratorKind::koch: return koch(spec);
    case GeneratorKind::cascade: return cascade(spec);
    case GeneratorKind::lipschitz_curve: return lipschitz_curve(spec);
  }
  throw ParameterError("unknown generator kind");
}

}  // namespace rectilib
