#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "rectilib/cubes.hpp"
#include "rectilib/density.hpp"
#include "rectilib/errors.hpp"
#include "rectilib/io.hpp"
#include "rectilib/kernels.hpp"
#include "rectilib/nets.hpp"
#include "rectilib/pipeline.hpp"

using namespace rectilib;
using io::json;

namespace {

struct InputOpts {
  std::string points, matrix, weights, gen_kind, gen_spec;
  int resolution = 0;
  std::vector<std::string> params;
  std::vector<std::string> target;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--points", points, "Point cloud (CSV id,x1..xd,weight or JSON)");
    app->add_option("--matrix", matrix, "Distance matrix CSV");
    app->add_option("--weights", weights, "Weights CSV for --matrix");
    app->add_option("--gen", gen_kind, "Generator kind");
    app->add_option("--resolution", resolution, "Generator resolution");
    app->add_option("--param", params, "Generator parameter name=v1[,v2...]");
    app->add_option("--gen-spec", gen_spec, "Generator spec JSON file");
    app->add_option("--seed", seed, "Generator seed");
    app->add_option("--target", target, "Labels of the target set E");
  }

  std::optional<GeneratorSpec> generator() const {
    if (!gen_spec.empty()) return io::generator_from_json(io::read_json(gen_spec));
    if (gen_kind.empty()) return std::nullopt;
    GeneratorSpec s;
    s.kind = parse_generator_kind(gen_kind);
    s.resolution = resolution;
    s.seed = seed;
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw InputError("--param expects name=values, got '" + p + "'");
      std::vector<double> vals;
      std::stringstream in(p.substr(eq + 1));
      std::string cell;
      while (std::getline(in, cell, ',')) {
        try {
          vals.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw InputError("bad number in --param '" + p + "'");
        }
      }
      s.params[p.substr(0, eq)] = vals;
    }
    return s;
  }

  void fill(RunConfig& cfg) const {
    if (!points.empty()) cfg.points = points;
    if (!matrix.empty()) cfg.matrix = matrix;
    if (!weights.empty()) cfg.weights = weights;
    cfg.generator = generator();
    cfg.target = target;
  }

  Generated load() const {
    RunConfig cfg;
    fill(cfg);
    return load_input(cfg);
  }
};

struct ScaleOpts {
  double rho = 1.0 / 12.0;
  double c0 = 1.0 / 500.0;
  std::optional<int> n_max;

  void attach(CLI::App* app) {
    app->add_option("--rho", rho, "Net scale ratio")->capture_default_str();
    app->add_option("--c0", c0, "Inner-ball constant")->capture_default_str();
    app->add_option("--n-max", n_max, "Finest net level");
  }

  NetHierarchy nets(const Generated& g, ScanOrder order = ScanOrder::ascending_id) const {
    const double diam = kernels::parallel::diameter(g.space);
    const int n_min = coarsest_level(rho, std::max(diam, 1e-300));
    const int top = n_max ? *n_max : saturation_level(g.space, rho, n_min);
    return build_nets(g.space, rho, n_min, std::max(n_min, top), {{g.target.xi0}, order});
  }
};

struct PipelineOpts {
  RunConfig cfg;
  void attach(CLI::App* app) {
    app->add_option("--rho", cfg.rho)->capture_default_str();
    app->add_option("--c0", cfg.c0)->capture_default_str();
    app->add_option("--M", cfg.M, "Witness dilation")->capture_default_str();
    app->add_option("--delta", cfg.delta, "Porosity gap")->capture_default_str();
    app->add_option("--n0", cfg.n0, "Bridge level offset")->capture_default_str();
    app->add_option("--n-max", cfg.n_max);
    app->add_option("--eps-res", cfg.eps_res, "E-adjacency radius");
    app->add_option("--r-lo", cfg.r_lo);
    app->add_option("--r-hi", cfg.r_hi);
    app->add_option("--b", cfg.b, "Supplied shadow multiplicity");
    app->add_option("--C-mu", cfg.C_mu, "Supplied doubling constant");
    app->add_flag("--strict", cfg.strict, "Require rho < 1/1000 and c0 = 1/500");
    app->add_flag("--force", cfg.force, "Run despite validator violations");
    app->add_flag("--spanning", cfg.spanning, "Star bridges instead of complete pairing");
    app->add_option("--max-bridges", cfg.max_bridges)->capture_default_str();
    app->add_option("--pairs", cfg.sample_pairs, "Sampled parameter pairs")->capture_default_str();
    app->add_option("--check-seed", cfg.seed)->capture_default_str();
  }
};

void emit(const json& doc, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << doc.dump(2) << '\n';
  else
    io::write_json(doc, out);
}

}  // namespace

int main(int argc, char** argv) {
  kernels::apply_thread_cap_from_env();
  CLI::App app{"Nets, dyadic cubes, porosity and curve assembly on finite metric measure spaces"};
  app.require_subcommand(1);
  int code = 0;
  std::string out;

  InputOpts gen_in;
  std::string gen_target_out;
  auto* gen = app.add_subcommand("gen", "Write a generated point cloud as CSV");
  gen_in.attach(gen);
  gen->add_option("--kind", gen_in.gen_kind, "Generator kind");
  gen->add_option("--out", out, "Output CSV")->required();
  gen->add_option("--target-out", gen_target_out, "Also write the target labels (one per line)");
  gen->callback([&] {
    const Generated g = gen_in.load();
    io::write_points_csv(g.space, out);
    if (!gen_target_out.empty()) {
      std::ofstream t(gen_target_out);
      for (PointId p : g.target.members) t << g.space.label(p) << '\n';
    }
  });

  InputOpts nets_in;
  ScaleOpts nets_sc;
  bool farthest = false;
  auto* nets = app.add_subcommand("nets", "Build and verify the net hierarchy");
  nets_in.attach(nets);
  nets_sc.attach(nets);
  nets->add_flag("--farthest", farthest, "Farthest-point scan order");
  nets->add_option("--out", out);
  nets->callback([&] {
    const Generated g = nets_in.load();
    const auto h = nets_sc.nets(g, farthest ? ScanOrder::farthest_point : ScanOrder::ascending_id);
    const auto rep = verify_nets(h, g.space);
    json j = io::to_json(h, rep);
    json levels = json::array();
    for (int n = h.n_min; n <= h.n_max; ++n) {
      json ids = json::array();
      for (PointId p : h.level(n)) ids.push_back(g.space.label(p));
      levels.push_back(ids);
    }
    j["levels"] = levels;
    j["packing"] = packing_counts(h, g.space);
    emit(j, out);
    code = rep.ok() ? 0 : 1;
  });

  InputOpts cubes_in;
  ScaleOpts cubes_sc;
  auto* cubes = app.add_subcommand("cubes", "Build and verify the dyadic cube tree");
  cubes_in.attach(cubes);
  cubes_sc.attach(cubes);
  cubes->add_option("--out", out);
  cubes->callback([&] {
    const Generated g = cubes_in.load();
    const auto tree = build_cubes(g.space, cubes_sc.nets(g), cubes_sc.c0, g.target.xi0);
    const auto rep = verify_cube_axioms(tree, g.space);
    emit(io::to_json(tree, rep, true), out);
    code = rep.structural_ok() ? 0 : 1;
  });

  InputOpts dens_in;
  double r_lo = 0.0, r_hi = 0.0;
  auto* dens = app.add_subcommand("density", "Lower-density profiles on E");
  dens_in.attach(dens);
  dens->add_option("--r-lo", r_lo, "Smallest radius")->required();
  dens->add_option("--r-hi", r_hi, "Largest radius")->required();
  dens->add_option("--out", out);
  dens->callback([&] {
    const Generated g = dens_in.load();
    const auto profiles = density_profiles(g.space, g.target.members, r_lo, r_hi);
    json arr = json::array();
    for (const auto& p : profiles) arr.push_back(io::to_json(p, g.space));
    const auto radii = halving_grid(r_lo, r_hi);
    emit({{"profiles", arr}, {"lower_mass", io::to_json(lower_mass_check(g.space, g.target.members, radii), g.space)}},
         out);
  });

  InputOpts beta_in;
  auto* beta = app.add_subcommand("beta2", "Best-line L2 deviation of E");
  beta_in.attach(beta);
  beta->add_option("--out", out);
  beta->callback([&] {
    const Generated g = beta_in.load();
    emit(io::to_json(beta2(g.space, g.target.members)), out);
  });

  InputOpts bs_in;
  std::string bs_point;
  int bs_depth = 8;
  auto* bs = app.add_subcommand("bssum", "Truncated dyadic diam/mass sum at a point");
  bs_in.attach(bs);
  bs->add_option("--point", bs_point, "Point label")->required();
  bs->add_option("--depth", bs_depth)->capture_default_str();
  bs->add_option("--out", out);
  bs->callback([&] {
    const Generated g = bs_in.load();
    emit(io::to_json(bs_sum(g.space, g.space.index_of(bs_point), bs_depth)), out);
  });

  std::map<std::string, std::pair<InputOpts, PipelineOpts>> stage_opts;
  std::string out_dir;
  auto add_stage = [&](const std::string& name, const std::string& help, RunConfig::Until until,
                       bool entries) {
    auto& [in, po] = stage_opts[name];
    auto* sub = app.add_subcommand(name, help);
    in.attach(sub);
    po.attach(sub);
    sub->add_option("--out", out, "Report JSON (default stdout)");
    sub->add_option("--out-dir", out_dir, "Directory for report.json, timings.json and CSV outputs");
    sub->callback([&, name, until, entries] {
      auto& [in2, po2] = stage_opts[name];
      RunConfig cfg = po2.cfg;
      in2.fill(cfg);
      cfg.until = until;
      cfg.carleson_entries = entries;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      const RunReport r = run_pipeline(cfg);
      if (out_dir.empty() || !out.empty()) emit(r.report, out);
      code = r.exit_code;
    });
  };
  add_stage("porous", "Porous cubes, Carleson ratios, constants and shadow map",
            RunConfig::Until::porous, true);
  add_stage("curve", "Bridges, assembled curve, connectivity and length budget",
            RunConfig::Until::curve, false);
  add_stage("param", "Curve parametrization and Lipschitz check", RunConfig::Until::all, false);
  add_stage("run", "Full pipeline", RunConfig::Until::all, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return code;
}
