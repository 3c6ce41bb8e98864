// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rectilib/cubes.hpp"
#include "rectilib/density.hpp"
#include "rectilib/generators.hpp"
#include "rectilib/nets.hpp"
#include "rectilib/pipeline.hpp"
#include "rectilib/porosity.hpp"

using namespace rectilib;

namespace {

constexpr double kNetSeconds = 10.0;
constexpr double kCarlesonSeconds = 60.0;
constexpr double kLipSlack = 1e-9;
constexpr double kBetaAbs = 1e-6;
constexpr double kSquareTol = 1e-9;
constexpr double kKochExponentTol = 0.1;
constexpr double kCantorDensityFloor = 0.2;
constexpr double kCantorBetaFloor = 0.1;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<PointId> all_ids(const MetricMeasureSpace& s) {
  std::vector<PointId> v(s.size());
  for (PointId p = 0; p < v.size(); ++p) v[p] = p;
  return v;
}

RunConfig generator_run(GeneratorKind kind, int resolution, std::map<std::string, std::vector<double>> params = {}) {
  RunConfig cfg;
  cfg.generator = GeneratorSpec{kind, resolution, std::move(params), 0};
  return cfg;
}

struct NetFixture {
  std::string name;
  GeneratorSpec spec;
};

const std::vector<NetFixture>& net_fixtures() {
  static const std::vector<NetFixture> f{{"interval(1000)", {GeneratorKind::interval, 1000, {}, 0}},
                                         {"circle(1000)", {GeneratorKind::circle, 1000, {}, 0}},
                                         {"grid2d(64^2)", {GeneratorKind::grid2d, 64, {}, 0}},
                                         {"cascade(6)", {GeneratorKind::cascade, 6, {}, 0}}};
  return f;
}

void nets_and_cubes() {
  bool nets_ok = true, cubes_ok = true;
  double slowest = 0.0;
  std::ostringstream nd, cd;
  for (const auto& fx : net_fixtures()) {
    const auto g = generate(fx.spec);
    for (double rho : {0.25, 1.0 / 16.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      const int top = coarsest_level(rho, diameter(g.space));
      const auto nets = build_nets(g.space, rho, top, saturation_level(g.space, rho, top));
      const double took = seconds_since(t0);
      slowest = std::max(slowest, took);
      bool ok = took < kNetSeconds;
      for (int n = nets.n_min; n <= nets.n_max; ++n) {
        ok = ok && oracle::separated(g.space, nets.level(n), nets.scale(n)) &&
             oracle::covers(g.space, nets.level(n), nets.scale(n));
        if (n > nets.n_min) ok = ok && oracle::subset(nets.level(n - 1), nets.level(n));
      }
      if (!ok) nd << fx.name << " rho=" << rho << " ";
      nets_ok = nets_ok && ok;

      const auto tree = build_cubes(g.space, nets, 1.0 / 500.0);
      bool c_ok = true;
      for (int n = tree.n_min(); n <= tree.n_max(); ++n) {
        std::vector<int> hits(g.space.size(), 0);
        for (CubeId id : tree.level(n)) {
          const Cube& c = tree.cube(id);
          for (PointId p : c.members) {
            ++hits[p];
            c_ok = c_ok && oracle::euclid(g.space, c.center, p) < 5.0 * nets.scale(n);
          }
          if (n > tree.n_min()) c_ok = c_ok && oracle::subset(c.members, tree.cube(*c.parent).members);
        }
        c_ok = c_ok && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
      }
      if (!c_ok) cd << fx.name << " rho=" << rho << " ";
      cubes_ok = cubes_ok && c_ok;
    }
  }
  std::ostringstream d1;
  d1 << "8 runs, separation/covering/nesting exact, slowest build " << slowest << " s (limit " << kNetSeconds << " s)";
  if (!nets_ok) d1 << "; failing: " << nd.str();
  report(1, "net axioms", nets_ok, d1.str());

  // Strict regime on a 50-point micro-space: five tight clusters, rho = 1/1000.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(-0.004, 0.004);
  std::vector<double> xy;
  const double cx[5] = {0.0, 0.6, 0.2, 0.7, 0.3}, cy[5] = {0.0, 0.0, 0.5, 0.55, 0.8};
  for (int c = 0; c < 5; ++c)
    for (int k = 0; k < 10; ++k) {
      xy.push_back(cx[c] + jitter(rng));
      xy.push_back(cy[c] + jitter(rng));
    }
  const auto micro = MetricMeasureSpace::from_coords(2, xy, std::vector<double>(50, 0.02));
  const double rho = 1.0 / 1000.0;
  const int top = coarsest_level(rho, diameter(micro));
  const auto strict = build_cubes(micro, build_nets(micro, rho, top, top + 1), 1.0 / 500.0);
  const bool strict_ok = strict.c0_achieved >= 1.0 / 500.0 && verify_cube_axioms(strict, micro).structural_ok();
  std::ostringstream d2;
  d2 << "partition/nesting/outer ball exact on the 8 runs; strict micro-space c0_achieved " << strict.c0_achieved
     << " (need >= 0.002)";
  if (!cubes_ok) d2 << "; failing: " << cd.str();
  report(2, "cube axioms", cubes_ok && strict_ok, d2.str());
}

void vitali() {
  const auto s = generate({GeneratorKind::grid2d, 24, {}, 0}).space;
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::uniform_int_distribution<PointId> pick(0, s.size() - 1);
    std::uniform_real_distribution<double> rad(0.005, 0.4);
    std::vector<Ball> balls(3 + seed % 60);
    for (auto& b : balls) b = {pick(rng), rad(rng)};
    const auto sel = vitali_subcover(balls, s);
    for (std::size_t i = 0; i < sel.size(); ++i)
      for (std::size_t j = i + 1; j < sel.size(); ++j)
        for (PointId p = 0; p < s.size(); ++p)
          if (oracle::euclid(s, p, sel[i].center) < sel[i].radius && oracle::euclid(s, p, sel[j].center) < sel[j].radius)
            ++bad;
    for (const Ball& b : balls) {
      bool covered = false;
      for (const Ball& k : sel) covered = covered || oracle::euclid(s, b.center, k.center) < 5.0 * k.radius;
      bad += !covered;
    }
  }
  report(3, "vitali covering", bad == 0, "100 random families, " + std::to_string(bad) + " failures");
}

void hausdorff_vs_mass() {
  struct Case {
    std::string name;
    Generated g;
  };
  std::vector<Case> cases{{"interval(1000)", generate({GeneratorKind::interval, 1000, {}, 0})},
                          {"circle(1000, mu_r)", generate({GeneratorKind::circle, 1000, {{"mu_r", {1.0}}}, 0})}};
  bool ok = true;
  std::ostringstream d;
  const double delta = 0.1;
  for (const auto& c : cases) {
    const double n = double(c.g.space.size());
    const auto radii = halving_grid(2.0 / n * 1.01, 0.25 * diameter(c.g.space));
    const bool pre = lower_mass_check(c.g.space, c.g.target.members, radii).ok;
    const auto h = hausdorff_estimate(c.g.space, c.g.target, delta);
    double mu = 0.0;
    for (PointId p : c.g.target.members) mu += c.g.space.weight(p);
    ok = ok && pre && h.upper <= 10.0 * mu;
    d << c.name << ": mu>=2r " << (pre ? "holds" : "FAILS") << ", H upper " << h.upper << " <= 10 mu(E) " << 10.0 * mu
      << " (slack " << 10.0 * mu - h.upper << "); ";
  }
  report(4, "H1 vs mu", ok, d.str());
}

void carleson() {
  struct Case {
    std::string name;
    RunConfig cfg;
  };
  auto cascade = generator_run(GeneratorKind::cascade, 6);
  // The default cascade target is the whole space, which has no porous cubes;
  // the left half keeps the family nontrivial.
  const auto g = generate(*cascade.generator);
  for (PointId p = 0; p < g.space.size(); ++p)
    if (g.space.coords(p)[0] < 0.5) cascade.target.push_back(g.space.label(p));
  std::vector<Case> cases{{"cascade(6), left half", cascade},
                          {"cascade(6), all points", generator_run(GeneratorKind::cascade, 6)},
                          {"segment(1000) with holes",
                           generator_run(GeneratorKind::interval, 1000, {{"holes", {0.35, 0.4, 0.55, 0.62}}})}};
  bool ok = true;
  std::ostringstream d;
  for (auto& c : cases) {
    c.cfg.until = RunConfig::Until::porous;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_pipeline(c.cfg);
    const double took = seconds_since(t0);
    const auto& car = r.report["carleson"];
    const auto& sh = r.report["shadow"];
    const bool this_ok = r.report["validation"]["ok"] == true && car["ok"] == true &&
                         car["worst_ratio"].get<double>() <= car["C1"].get<double>() &&
                         sh["inequalities_ok"] == true && took < kCarlesonSeconds;
    ok = ok && this_ok;
    d << c.name << ": |P| " << r.report["porous"]["count"] << ", worst " << car["worst_ratio"].get<double>()
      << " <= C1 " << car["C1"].get<double>() << " (b_observed " << car["b"] << "), shadow "
      << (sh["inequalities_ok"] == true ? "ok" : "FAILS") << ", " << took << " s; ";
  }
  report(5, "carleson packing", ok, d.str());
}

void beta_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0), wd(0.05, 3.0);
  std::uniform_int_distribution<int> count(3, 64);
  const int angles = 100, offsets = 100;
  double worst_excess = -INFINITY;
  bool ok = true;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = count(rng);
    const double squash = 0.02 + 0.04 * trial;
    std::vector<double> xy(2 * n), w(n);
    for (int i = 0; i < n; ++i) {
      xy[2 * i] = u(rng);
      xy[2 * i + 1] = squash * u(rng);
      w[i] = wd(rng);
    }
    const auto s = MetricMeasureSpace::from_coords(2, xy, w);
    const double pca = beta2(s, all_ids(s)).beta2;
    const auto grid = oracle::grid_beta2(xy, w, angles, offsets);
    // Angle step pi/A leaves the best grid normal within pi/(2A) of optimal.
    double mass = 0.0, mx = 0.0, my = 0.0, diam = 0.0, scatter = 0.0;
    for (int i = 0; i < n; ++i) {
      mass += w[i];
      mx += w[i] * xy[2 * i];
      my += w[i] * xy[2 * i + 1];
    }
    mx /= mass;
    my /= mass;
    for (int i = 0; i < n; ++i) {
      scatter += w[i] * (std::pow(xy[2 * i] - mx, 2) + std::pow(xy[2 * i + 1] - my, 2));
      for (int j = i + 1; j < n; ++j)
        diam = std::max(diam, std::hypot(xy[2 * i] - xy[2 * j], xy[2 * i + 1] - xy[2 * j + 1]));
    }
    const double slack = std::sqrt(scatter / mass) * std::sin(std::numbers::pi / (2.0 * angles)) / diam;
    const double gap = std::abs(pca - grid.beta2);
    ok = ok && gap <= kBetaAbs + slack && pca <= grid.beta2 + 1e-12;
    worst_excess = std::max(worst_excess, gap - slack);
  }
  const std::vector<double> sq{-0.5, -0.5, 0.5, -0.5, -0.5, 0.5, 0.5, 0.5};
  const auto s = MetricMeasureSpace::from_coords(2, sq, {1, 1, 1, 1});
  const double b = beta2(s, all_ids(s)).beta2;
  const double g = oracle::grid_beta2(sq, {1, 1, 1, 1}, angles, offsets).beta2;
  const bool square_ok = std::abs(b * b - 0.125) <= kSquareTol && std::abs(b * b - g * g) <= kSquareTol;
  std::ostringstream d;
  d << "25 clouds, 10^4 lines each, max(|PCA - grid| - grid slack) " << worst_excess << " (allowed " << kBetaAbs
    << "); square beta^2 " << b * b << " vs grid " << g * g;
  report(6, "beta2 oracle", ok && square_ok, d.str());
}

void curves() {
  struct Case {
    std::string name;
    RunConfig cfg;
    bool connected;
  };
  std::vector<Case> cases{
      {"interval(400)", generator_run(GeneratorKind::interval, 400), true},
      {"circle(400, mu_r)", generator_run(GeneratorKind::circle, 400, {{"mu_r", {1.0}}}), true},
      {"segment(400) with hole", generator_run(GeneratorKind::interval, 400, {{"holes", {0.45, 0.55}}}), true},
      {"cantor4(4)", generator_run(GeneratorKind::cantor4, 4), false}};
  bool c7 = true, c8 = true, c9 = true;
  std::ostringstream d7, d8, d9;
  for (auto& c : cases) {
    c.cfg.sample_pairs = 10000;
    const auto r = run_pipeline(c.cfg);
    const bool valid = r.report["validation"]["ok"] == true;
    const bool got = r.components == 1;
    c7 = c7 && valid && (c.connected ? got : r.components > 1);
    d7 << c.name << ": " << r.components << " component(s); ";
    if (!got) continue;

    const auto& lb = r.report["length_budget"];
    const bool budget = lb["e_part"].get<double>() <= 10.0 * lb["mu_e"].get<double>() &&
                        lb["bridge_part"].get<double>() <= lb["bound_bridge"].get<double>() &&
                        lb["scale_half_ok"] == true;
    c8 = c8 && budget;
    d8 << c.name << ": e " << lb["e_part"].get<double>() << " <= " << 10.0 * lb["mu_e"].get<double>() << ", bridges "
       << lb["bridge_part"].get<double>() << " <= " << lb["bound_bridge"].get<double>() << ", scale cubes "
       << lb["scale_cubes"] << (lb["scale_cubes"] == 0 ? " (half-mass clause vacuous)" : "") << "; ";

    const auto& chk = r.report["parametrization"]["check"];
    const double limit = 2.0 * r.param->tree_length * (1.0 + kLipSlack);
    const bool lip = chk["surjective"] == true && chk["max_ratio"].get<double>() <= limit &&
                     chk["pairs_checked"].get<std::size_t>() >= 10000;
    c9 = c9 && lip;
    d9 << c.name << ": missing " << chk["missing"] << ", ratio/2L - 1 = "
       << chk["max_ratio"].get<double>() / (2.0 * r.param->tree_length) - 1.0 << " over " << chk["pairs_checked"]
       << " pairs; ";
  }
  report(7, "curve connectivity", c7, d7.str());
  report(8, "length budget", c8, d8.str());
  report(9, "parametrization", c9, d9.str() + "tolerance 1e-9");
}

double min_lower(const Generated& g, double r_lo, double r_hi) {
  double lo = INFINITY;
  for (const auto& p : density_profiles(g.space, g.target.members, r_lo, r_hi)) lo = std::min(lo, p.lower_estimate);
  return lo;
}

void density() {
  std::ostringstream d;
  const auto circle = generate({GeneratorKind::circle, 4096, {}, 0});
  const double c = min_lower(circle, 0.02, 0.5);
  double c_hi = 0.0;
  for (const auto& p : density_profiles(circle.space, circle.target.members, 0.02, 0.5))
    c_hi = std::max(c_hi, p.lower_estimate);
  const bool circle_ok = c >= 1.9 && c_hi <= 2.1;
  d << "circle lower in [" << c << ", " << c_hi << "]; ";

  // Koch: grid anchored to the construction scale 3^-L.
  std::vector<double> lows, logr;
  for (int level : {4, 5, 6}) {
    const double r_lo = std::pow(3.0, -level);
    lows.push_back(min_lower(generate({GeneratorKind::koch, level, {}, 0}), r_lo, 16.0 * r_lo));
    logr.push_back(std::log(r_lo));
  }
  const double slope = (std::log(lows[2]) - std::log(lows[0])) / (logr[2] - logr[0]);
  const double want = std::log(4.0) / std::log(3.0) - 1.0;
  const bool koch_ok = lows[0] > lows[1] && lows[1] > lows[2] && std::abs(slope - want) <= kKochExponentTol;
  d << "koch lower " << lows[0] << ", " << lows[1] << ", " << lows[2] << ", exponent " << slope << " vs " << want
    << "; ";

  // Cantor: positive lower density, yet every dyadic piece stays far from a line.
  const int L = 5;
  const auto cantor = generate({GeneratorKind::cantor4, L, {}, 0});
  const double cl = min_lower(cantor, std::pow(4.0, -L), 0.5);
  double min_beta = INFINITY;
  for (int k = 0; k < L - 1; ++k) {
    const std::size_t pieces = std::size_t{1} << (2 * k), size = cantor.space.size() / pieces;
    for (std::size_t q = 0; q < pieces; ++q) {
      std::vector<PointId> piece(size);
      for (std::size_t i = 0; i < size; ++i) piece[i] = q * size + i;
      min_beta = std::min(min_beta, beta2(cantor.space, piece).beta2);
    }
  }
  const bool cantor_ok = cl >= kCantorDensityFloor && min_beta >= kCantorBetaFloor;
  d << "cantor4(5) lower " << cl << " (floor 0.2), min dyadic beta2 " << min_beta << " (floor 0.1)";
  report(10, "density discrimination", circle_ok && koch_ok && cantor_ok, d.str());
}

void validator() {
  const PorosityConfig good{11.0, 0.003, 2, 1.0 / 1024.0, 1.0 / 500.0, 2.0};
  auto has = [](const PorosityConfig& c, const std::string& constraint) {
    const auto v = validate_config(c);
    return !v.ok && std::any_of(v.violations.begin(), v.violations.end(),
                                [&](const ConfigViolation& x) { return x.constraint == constraint; });
  };
  auto m9 = good;
  m9.M = 9.0;
  auto d4 = good;
  d4.delta = 4.0 * good.rho;
  auto q = good;
  q.rho = 0.25;
  auto n1 = good;
  n1.n0 = 1;
  const bool n1_single = 5.0 * n1.M * n1.rho < 1.0 && validate_config(n1).violations.size() == 1;
  const bool ok = validate_config(good).ok && has(m9, "M > 10") && has(d4, "delta < 4*rho") && has(q, "1/rho > M") &&
                  has(n1, "n0 >= 2") && n1_single;
  report(11, "config validator", ok,
         "accepts (11, 0.003, 1/1024, 2); rejects M=9 [M > 10], delta=4 rho [delta < 4*rho], rho=1/4 [1/rho > M], "
         "n0=1 [n0 >= 2]");
}

void determinism() {
  auto cfg = generator_run(GeneratorKind::interval, 300, {{"holes", {0.4, 0.5}}});
  omp_set_num_threads(1);
  const auto a = run_pipeline(cfg).report.dump(2);
  omp_set_num_threads(std::max(2, omp_get_num_procs()));
  const auto b = run_pipeline(cfg).report.dump(2);
  const auto c = run_pipeline(cfg).report.dump(2);
  report(12, "determinism", a == b && b == c,
         "3 runs (1 and " + std::to_string(std::max(2, omp_get_num_procs())) + " threads), " +
             std::to_string(a.size()) + " bytes, " + (a == b && b == c ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
  nets_and_cubes();
  vitali();
  hausdorff_vs_mass();
  carleson();
  beta_oracle();
  curves();
  density();
  validator();
  determinism();
  return failures == 0 ? 0 : 1;
}
