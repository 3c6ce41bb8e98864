#include "rectilib/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rectilib/cubes.hpp"
#include "rectilib/density.hpp"
#include "rectilib/errors.hpp"
#include "rectilib/kernels.hpp"
#include "rectilib/nets.hpp"

namespace rectilib {

int exit_code_for(const std::exception& e) {
  if (auto* p = dynamic_cast<const PipelineError*>(&e)) return p->exit_code();
  if (dynamic_cast<const ConnectivityError*>(&e)) return 1;
  return 2;
}

Generated load_input(const RunConfig& cfg) {
  const int sources = (cfg.points ? 1 : 0) + (cfg.matrix ? 1 : 0) + (cfg.generator ? 1 : 0);
  if (sources != 1) throw InputError("exactly one of points, matrix or generator is required");
  Generated g;
  if (cfg.generator) {
    g = generate(*cfg.generator);
  } else {
    if (cfg.matrix && !cfg.weights) throw InputError("a distance matrix needs a weights file");
    g.space = cfg.points ? io::load_points(*cfg.points) : io::load_matrix(*cfg.matrix, *cfg.weights);
    std::vector<PointId> all(g.space.size());
    for (PointId p = 0; p < all.size(); ++p) all[p] = p;
    g.target = make_target(g.space, std::move(all));
  }
  if (!cfg.target.empty()) {
    std::vector<PointId> members;
    for (const auto& label : cfg.target) members.push_back(g.space.index_of(label));
    g.target = make_target(g.space, std::move(members));
  }
  return g;
}

namespace {

class Stages {
 public:
  template <class Fn>
  auto run(const std::string& name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        stop(name, start);
      } else {
        auto out = fn();
        stop(name, start);
        return out;
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const ConnectivityError& e) {
      throw PipelineError(name, e.what(), 1);
    } catch (const std::exception& e) {
      throw PipelineError(name, e.what(), 2);
    }
  }
  io::json timings = io::json::object();

 private:
  void stop(const std::string& name, std::chrono::steady_clock::time_point start) {
    timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

io::json config_json(const RunConfig& cfg) {
  auto opt = [](const auto& v) { return v ? io::json(*v) : io::json(nullptr); };
  io::json j;
  if (cfg.generator) j["generator"] = io::to_json(*cfg.generator);
  if (cfg.points) j["points"] = cfg.points->string();
  if (cfg.matrix) j["matrix"] = cfg.matrix->string();
  if (cfg.weights) j["weights"] = cfg.weights->string();
  if (!cfg.target.empty()) j["target"] = cfg.target;
  j["rho"] = cfg.rho;
  j["c0"] = cfg.c0;
  j["M"] = cfg.M;
  j["delta"] = cfg.delta;
  j["n0"] = cfg.n0;
  j["n_max"] = opt(cfg.n_max);
  j["eps_res"] = opt(cfg.eps_res);
  j["r_lo"] = opt(cfg.r_lo);
  j["r_hi"] = opt(cfg.r_hi);
  j["b"] = opt(cfg.b);
  j["C_mu"] = opt(cfg.C_mu);
  j["strict"] = cfg.strict;
  j["force"] = cfg.force;
  j["spanning"] = cfg.spanning;
  j["max_bridges"] = cfg.max_bridges;
  j["sample_pairs"] = cfg.sample_pairs;
  j["seed"] = cfg.seed;
  return j;
}

void write_outputs(const RunReport& r, const RunConfig& cfg) {
  if (!cfg.out_dir) return;
  io::write_json(r.report, *cfg.out_dir / "report.json");
  io::write_json(r.timings, *cfg.out_dir / "timings.json");
  if (!r.gamma.vertices.empty()) io::write_gamma_csv(r.space, r.gamma, *cfg.out_dir / "gamma.csv");
  if (r.param) io::write_param_csv(r.space, r.gamma, *r.param, *cfg.out_dir / "param.csv");
}

}  // namespace

RunReport run_pipeline(const RunConfig& cfg) {
  RunReport out;
  Stages st;
  io::json& rep = out.report;
  rep["schema"] = 1;
  rep["config"] = config_json(cfg);

  PorosityConfig pc{cfg.M, cfg.delta, cfg.n0, cfg.rho, cfg.c0, 2.0};
  const ConfigValidation validation = validate_config(pc, cfg.strict);
  rep["validation"] = io::to_json(validation);
  if (!validation.ok && !cfg.force) {
    rep["status"] = "rejected";
    out.exit_code = 2;
    write_outputs(out, cfg);
    return out;
  }

  Generated input = st.run("input", [&] { return load_input(cfg); });
  out.space = std::move(input.space);
  out.target = std::move(input.target);
  const MetricMeasureSpace& space = out.space;
  const TargetSet& e = out.target;
  rep["space"] = io::to_json(space, e);

  const double diam = st.run("diameter", [&] { return kernels::parallel::diameter(space); });
  const int n_min = coarsest_level(cfg.rho, std::max(diam, 1e-300));
  const int n_max = cfg.n_max ? *cfg.n_max : saturation_level(space, cfg.rho, n_min);
  const NetHierarchy nets = st.run("nets", [&] {
    NetOptions opts;
    opts.seeds = {e.xi0};
    return build_nets(space, cfg.rho, n_min, std::max(n_min, n_max), opts);
  });
  const NetReport net_report = st.run("verify_nets", [&] { return verify_nets(nets, space); });
  rep["nets"] = io::to_json(nets, net_report);

  const CubeTree tree = st.run("cubes", [&] { return build_cubes(space, nets, cfg.c0, e.xi0); });
  const CubeReport cube_report = st.run("verify_cubes", [&] { return verify_cube_axioms(tree, space); });
  rep["cubes"] = io::to_json(tree, cube_report, false);

  // Saturated nets can sit far below the sample spacing, so the default also
  // covers the widest nearest-neighbour gap of a point of E.
  double spacing = 0.0;
  if (!cfg.eps_res)
    for (double d : kernels::parallel::nearest_neighbor(space, e.members))
      if (std::isfinite(d)) spacing = std::max(spacing, d);
  const double eps_res = cfg.eps_res ? *cfg.eps_res : 2.0 * std::max(nets.scale(nets.n_max), spacing);
  double e_radius = 0.0;
  for (PointId p : e.members) e_radius = std::max(e_radius, space.dist(e.xi0, p));
  const double r_hi = cfg.r_hi ? *cfg.r_hi : std::max(e_radius / 2.0, eps_res);
  const double r_lo = cfg.r_lo ? *cfg.r_lo : std::min(eps_res, r_hi);
  const std::vector<double> radii = halving_grid(r_lo, r_hi);
  rep["scales"] = {{"eps_res", eps_res}, {"r_lo", r_lo}, {"r_hi", r_hi}, {"radii", radii}};

  st.run("density", [&] {
    const auto profiles = density_profiles(space, e.members, r_lo, r_hi);
    double lo = std::numeric_limits<double>::infinity(), sum = 0.0;
    PointId worst = e.members.front();
    for (const auto& p : profiles) {
      if (p.lower_estimate < lo) {
        lo = p.lower_estimate;
        worst = p.point;
      }
      sum += p.lower_estimate;
    }
    rep["density"] = {{"points", profiles.size()},
                      {"min_lower_estimate", lo},
                      {"mean_lower_estimate", sum / static_cast<double>(profiles.size())},
                      {"worst_point", space.label(worst)},
                      {"lower_mass", io::to_json(lower_mass_check(space, e.members, radii), space)}};
  });

  st.run("doubling", [&] {
    if (cfg.C_mu) {
      pc.C_mu = *cfg.C_mu;
      rep["doubling"] = {{"supplied", pc.C_mu}};
      return;
    }
    const DoublingEstimate d = doubling_estimate(space, radii, e.members);
    pc.C_mu = d.c_hat;
    rep["doubling"] = io::to_json(d, space);
    if (!(pc.C_mu > 1.0)) {
      pc.C_mu = std::nextafter(1.0, 2.0);
      rep["doubling"]["clamped"] = true;
    }
  });
  rep["porosity_config"] = io::to_json(pc);

  const auto family = st.run("porous", [&] { return find_porous(tree, space, e, pc); });
  rep["porous"] = {{"count", family.size()}, {"family", io::to_json(family, space)}};

  const ShadowReport shadow = st.run("shadow", [&] { return shadow_map(tree, space, e, family, pc); });
  rep["shadow"] = io::to_json(shadow);
  const CarlesonReport carleson = st.run("carleson", [&] {
    const AppendixConstants k = cfg.b ? appendix_constants(pc, *cfg.b, "supplied")
                                      : appendix_constants(pc, std::max<double>(1.0, shadow.b_observed));
    CarlesonReport c = carleson_check(tree, family, k);
    c.b_observed = shadow.b_observed;
    return c;
  });
  rep["carleson"] = io::to_json(carleson, cfg.carleson_entries);

  io::json inv = {{"nets", net_report.ok()},
                  {"cubes", cube_report.structural_ok()},
                  {"carleson", carleson.ok},
                  {"shadow", shadow.inequalities_ok}};
  auto finish = [&] {
    bool all = true;
    for (const auto& [k, v] : inv.items()) all = all && v.get<bool>();
    rep["invariants"] = inv;
    rep["status"] = all ? "ok" : "invariant_failure";
    out.exit_code = all ? 0 : 1;
    out.timings = st.timings;
    write_outputs(out, cfg);
    return std::move(out);
  };
  if (cfg.until == RunConfig::Until::porous) return finish();

  const BridgeGraph bridges = st.run("bridges", [&] {
    return build_bridges(tree, space, family, pc, {cfg.spanning, cfg.max_bridges});
  });
  out.gamma = st.run("assemble", [&] { return assemble_gamma(space, e, bridges, eps_res); });
  const Connectivity conn = st.run("connectivity", [&] { return connectivity(out.gamma); });
  out.components = conn.components;
  rep["gamma"] = io::to_json(out.gamma, conn);

  const LengthBudget budget = st.run("length_budget", [&] {
    return length_budget(out.gamma, space, e, family, tree, pc, radii);
  });
  rep["length_budget"] = io::to_json(budget);
  inv["connected"] = conn.components == 1;
  inv["length_budget"] = budget.ok;
  if (cfg.until == RunConfig::Until::curve) return finish();

  bool param_ok = false;
  if (conn.components == 1) {
    out.param = st.run("parametrize", [&] { return parametrize(out.gamma); });
    const ParamCheck check = st.run("check_parametrization", [&] {
      return check_parametrization(*out.param, out.gamma, cfg.sample_pairs, cfg.seed);
    });
    rep["parametrization"] = io::to_json(*out.param);
    rep["parametrization"]["check"] = io::to_json(check);
    param_ok = check.ok();
  } else {
    rep["parametrization"] = {{"skipped", "graph is disconnected"}};
  }

  inv["parametrization"] = param_ok;
  return finish();
}

}  // namespace rectilib
