#include "rectilib/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rectilib/errors.hpp"
#include "rectilib/kernels.hpp"

namespace rectilib {

ConfigValidation validate_config(const PorosityConfig& cfg, bool strict) {
  ConfigValidation out;
  auto require = [&](bool holds, std::string constraint, std::string reason) {
    if (!holds) {
      out.ok = false;
      out.violations.push_back({std::move(constraint), std::move(reason)});
    }
  };
  require(cfg.rho > 0.0 && cfg.rho < 1.0, "0 < rho < 1", "net scale ratio");
  require(cfg.delta > 0.0, "delta > 0", "porosity gap");
  require(cfg.M > 10.0, "M > 10", "an uncovered point near E lies in a dilated porous cube");
  require(cfg.delta < 4.0 * cfg.rho, "delta < 4*rho", "that cube is porous");
  require(cfg.rho < 3.0 / (cfg.M + 1.0), "rho < 3/(M+1)",
          "adjacent porous cubes differ by at most two levels");
  require(1.0 / cfg.rho > cfg.M, "1/rho > M", "the finer bridge center lies in the coarser dilate");
  require(cfg.n0 >= 2, "n0 >= 2", "bridge nets reach two levels down");
  require(5.0 * cfg.M * std::pow(cfg.rho, cfg.n0) < 1.0, "5*M*rho^n0 < 1",
          "bridges stay inside the doubled root ball");
  if (strict) {
    require(cfg.rho < 1.0 / 1000.0, "rho < 1/1000", "strict cube construction regime");
    require(cfg.c0 == 1.0 / 500.0, "c0 = 1/500", "strict inner-ball constant");
  }
  return out;
}

std::vector<PorousCube> find_porous(const CubeTree& tree, const MetricMeasureSpace& space,
                                    const TargetSet& e, const PorosityConfig& cfg) {
  validate_target(space, e);
  const Cube& root = tree.cube(tree.root);
  for (PointId p : e.members)
    if (!std::binary_search(root.members.begin(), root.members.end(), p))
      throw ContainmentError("target point " + space.label(p) + " lies outside the root cube");

  const auto gap = kernels::parallel::distance_to_set(space, e.members);
  std::vector<char> in_e(space.size(), 0);
  for (PointId p : e.members) in_e[p] = 1;

  std::vector<CubeId> candidates;
  for (const Cube& c : tree.cubes) {
    if (!tree.is_descendant(c.id, tree.root)) continue;
    if (std::any_of(c.members.begin(), c.members.end(), [&](PointId p) { return in_e[p] != 0; }))
      candidates.push_back(c.id);
  }

  std::vector<std::optional<PorousCube>> found(candidates.size());
  const long long nc = static_cast<long long>(candidates.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < nc; ++i) {
    const Cube& c = tree.cubes[candidates[i]];
    const double reach = cfg.M * c.side;
    const double need = cfg.delta * c.side;
    std::optional<PorousCube> best;
    for (PointId q = 0; q < space.size(); ++q) {
      if (!(space.dist(c.center, q) < reach) || gap[q] < need) continue;
      if (!best || gap[q] > best->gap) best = PorousCube{c.id, q, gap[q]};
    }
    found[i] = best;
  }
  std::vector<PorousCube> family;
  for (const auto& f : found)
    if (f) family.push_back(*f);
  return family;
}

AppendixConstants appendix_constants(const PorosityConfig& cfg, double b, std::string b_mode) {
  if (!(cfg.C_mu > 1.0)) throw ParameterError("appendix constants need C_mu > 1");
  if (!(b >= 1.0)) throw ParameterError("multiplicity b must be at least 1");
  AppendixConstants k;
  const double lc = std::log2(cfg.C_mu);
  k.a = std::pow(cfg.C_mu, std::log2(cfg.c0 / (4.0 * cfg.M))) * std::pow(4.0 / cfg.rho, lc);
  k.b = b;
  k.b_mode = std::move(b_mode);
  k.C1 = k.a * k.b * std::pow(cfg.C_mu, std::log2(cfg.M / cfg.c0) + 1.0);
  return k;
}

CarlesonReport carleson_check(const CubeTree& tree, const std::vector<PorousCube>& family,
                              const AppendixConstants& constants) {
  CarlesonReport rep;
  rep.constants = constants;
  std::vector<double> acc(tree.cubes.size(), 0.0);
  for (const PorousCube& pc : family) acc[pc.cube] += tree.cube(pc.cube).mass;
  // Cube ids increase with level, so a reverse sweep visits children first.
  for (std::size_t i = tree.cubes.size(); i-- > 0;) {
    const Cube& c = tree.cubes[i];
    if (c.parent) acc[*c.parent] += acc[i];
  }
  for (const Cube& c : tree.cubes) {
    if (!tree.is_descendant(c.id, tree.root)) continue;
    if (!(c.mass > 0.0)) {
      ++rep.skipped;
      continue;
    }
    const double ratio = acc[c.id] / c.mass;
    rep.entries.push_back({c.id, acc[c.id], ratio});
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_cube = c.id;
    }
  }
  rep.ok = rep.worst_ratio <= constants.C1;
  return rep;
}

ShadowReport shadow_map(const CubeTree& tree, const MetricMeasureSpace& space, const TargetSet& e,
                        const std::vector<PorousCube>& family, const PorosityConfig& cfg) {
  ShadowReport rep;
  if (family.empty()) return rep;

  const auto to_e = kernels::parallel::distance_to_set(space, e.members);
  // empty2[c]: the open ball B(center, 2 side) misses E.
  std::vector<char> empty2(tree.cubes.size(), 0);
  for (const Cube& c : tree.cubes) empty2[c.id] = to_e[c.center] >= 2.0 * c.side;
  std::vector<char> maximal(tree.cubes.size(), 0);
  for (const Cube& c : tree.cubes) {
    if (!empty2[c.id]) continue;
    bool top = true;
    for (auto up = c.parent; up && top; up = tree.cubes[*up].parent) top = !empty2[*up];
    if (top) {
      maximal[c.id] = 1;
      rep.maximal_empty.push_back(c.id);
    }
  }

  std::map<CubeId, std::size_t> hits;
  for (const PorousCube& pc : family) {
    ShadowEntry entry;
    entry.cube = pc.cube;
    entry.witness = pc.witness;
    entry.gap = to_e[pc.witness];
    for (int lvl = tree.n_min(); lvl <= tree.n_max(); ++lvl) {
      const CubeId c = cube_of(tree, pc.witness, lvl);
      if (maximal[c]) {
        entry.shadow = c;
        break;
      }
    }
    const double side = tree.cube(pc.cube).side;
    if (entry.shadow) {
      const double shadow_side = tree.cube(*entry.shadow).side;
      entry.gap_bound = cfg.delta * side <= entry.gap && entry.gap <= (4.0 / cfg.rho) * shadow_side;
      entry.side_bound = shadow_side <= (2.0 * cfg.M / cfg.c0) * side;
      rep.inequalities_ok = rep.inequalities_ok && entry.gap_bound && entry.side_bound;
      rep.b_observed = std::max(rep.b_observed, ++hits[*entry.shadow]);
    } else {
      ++rep.resolution_failures;
    }
    rep.entries.push_back(entry);
  }
  return rep;
}

}  // namespace rectilib
