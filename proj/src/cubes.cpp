#include "rectilib/cubes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rectilib/errors.hpp"
#include "rectilib/kernels.hpp"

namespace rectilib {

const Cube& CubeTree::cube(CubeId id) const {
  if (id >= cubes.size()) throw IdentifierError("unknown cube id " + std::to_string(id));
  return cubes[id];
}

const std::vector<CubeId>& CubeTree::level(int n) const {
  if (n < n_min() || n > n_max())
    throw ParameterError("cube level " + std::to_string(n) + " outside the tree");
  return by_level[static_cast<std::size_t>(n - n_min())];
}

bool CubeTree::is_descendant(CubeId c, CubeId ancestor) const {
  std::optional<CubeId> cur = c;
  while (cur) {
    if (*cur == ancestor) return true;
    if (cubes[*cur].level <= cubes[ancestor].level) return false;
    cur = cubes[*cur].parent;
  }
  return false;
}

CubeTree build_cubes(const MetricMeasureSpace& space, const NetHierarchy& nets, double c0_target,
                     std::optional<PointId> root_point) {
  if (nets.levels.empty() || nets.levels.front().empty())
    throw ParameterError("cannot build cubes from an empty hierarchy");
  if (!(c0_target > 0.0 && c0_target < 0.5)) throw ParameterError("c0_target must lie in (0, 1/2)");

  CubeTree tree;
  tree.nets = nets;
  tree.c0_target = c0_target;
  const std::size_t n = space.size();
  const std::size_t nlev = nets.levels.size();

  // Cube ids: contiguous per level, ascending center within a level.
  std::vector<CubeId> offset(nlev, 0);
  for (std::size_t li = 0; li < nlev; ++li) {
    offset[li] = tree.cubes.size();
    const int lvl = nets.n_min + static_cast<int>(li);
    std::vector<CubeId> ids;
    for (PointId c : nets.levels[li]) {
      Cube cube;
      cube.id = tree.cubes.size();
      cube.level = lvl;
      cube.center = c;
      cube.side = 5.0 * std::pow(nets.rho, lvl);
      ids.push_back(cube.id);
      tree.cubes.push_back(std::move(cube));
    }
    tree.by_level.push_back(std::move(ids));
  }
  auto local_index = [&](std::size_t li, PointId center) {
    const auto& xs = nets.levels[li];
    return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), center) - xs.begin());
  };

  // Parent of each level-(li+1) center: nearest level-li center.
  for (std::size_t li = 0; li + 1 < nlev; ++li) {
    const auto& fine = nets.levels[li + 1];
    const auto parents = kernels::parallel::nearest_member(space, fine, nets.levels[li]);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const CubeId child = offset[li + 1] + i;
      const CubeId parent = offset[li] + local_index(li, parents[i]);
      tree.cubes[child].parent = parent;
      tree.cubes[parent].children.push_back(child);
    }
  }

  // Every point to its nearest finest center, then up the parent chain.
  std::vector<PointId> all(n);
  std::iota(all.begin(), all.end(), PointId{0});
  tree.owner.assign(nlev, std::vector<CubeId>(n, 0));
  const auto finest = kernels::parallel::nearest_member(space, all, nets.levels.back());
  for (PointId p = 0; p < n; ++p)
    tree.owner[nlev - 1][p] = offset[nlev - 1] + local_index(nlev - 1, finest[p]);
  for (std::size_t li = nlev - 1; li-- > 0;)
    for (PointId p = 0; p < n; ++p) tree.owner[li][p] = *tree.cubes[tree.owner[li + 1][p]].parent;

  for (std::size_t li = 0; li < nlev; ++li)
    for (PointId p = 0; p < n; ++p) tree.cubes[tree.owner[li][p]].members.push_back(p);

  // Masses: finest level from weights, coarser levels as sums of children.
  for (CubeId id : tree.by_level.back()) {
    Cube& c = tree.cubes[id];
    for (PointId p : c.members) c.mass += space.weight(p);
  }
  for (std::size_t li = nlev - 1; li-- > 0;)
    for (CubeId id : tree.by_level[li]) {
      Cube& c = tree.cubes[id];
      for (CubeId ch : c.children) c.mass += tree.cubes[ch].mass;
    }

  // c0_achieved = min over cubes of dist(center, nearest non-member) / side.
  tree.c0_achieved = std::numeric_limits<double>::infinity();
  for (std::size_t li = 0; li < nlev; ++li) {
    std::vector<std::size_t> local(n);
    for (PointId p = 0; p < n; ++p) local[p] = tree.owner[li][p] - offset[li];
    const auto gap = kernels::parallel::distance_to_foreign(space, nets.levels[li], local);
    for (std::size_t i = 0; i < gap.size(); ++i)
      tree.c0_achieved = std::min(tree.c0_achieved, gap[i] / tree.cubes[offset[li] + i].side);
  }

  tree.root = tree.by_level.front().front();
  if (root_point) {
    space.check_id(*root_point);
    tree.root = tree.owner.front()[*root_point];
  }
  return tree;
}

CubeId cube_of(const CubeTree& tree, PointId p, int level) {
  tree.level(level);  // range check
  const auto& own = tree.owner[static_cast<std::size_t>(level - tree.n_min())];
  if (p >= own.size()) throw IdentifierError("unknown point index " + std::to_string(p));
  return own[p];
}

CubeReport verify_cube_axioms(const CubeTree& tree, const MetricMeasureSpace& space) {
  CubeReport rep;
  const std::size_t n = space.size();
  const std::size_t nlev = tree.by_level.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // Member-derived assignment per level.
  std::vector<std::vector<CubeId>> holder(nlev, std::vector<CubeId>(n, kNone));
  for (std::size_t li = 0; li < nlev; ++li) {
    for (CubeId id : tree.by_level[li])
      for (PointId p : tree.cubes[id].members) {
        if (holder[li][p] != kNone && rep.partition) {
          rep.partition = false;
          rep.witnesses.push_back({id, p, 0.0, "point in two cubes of one level"});
        }
        if (holder[li][p] == kNone) holder[li][p] = id;
      }
    for (PointId p = 0; p < n && rep.partition; ++p)
      if (holder[li][p] == kNone) {
        rep.partition = false;
        rep.witnesses.push_back({0, p, 0.0, "point in no cube of its level"});
      }
  }

  for (std::size_t li = 1; li < nlev && rep.nesting; ++li)
    for (CubeId id : tree.by_level[li]) {
      const Cube& c = tree.cubes[id];
      if (!c.parent) {
        rep.nesting = false;
        rep.witnesses.push_back({id, c.center, 0.0, "non-root cube without parent"});
        break;
      }
      auto bad = std::find_if(c.members.begin(), c.members.end(),
                              [&](PointId p) { return holder[li - 1][p] != *c.parent; });
      if (bad != c.members.end()) {
        rep.nesting = false;
        rep.witnesses.push_back({id, *bad, 0.0, "member outside the parent cube"});
        break;
      }
    }

  for (const Cube& c : tree.cubes) {
    if (rep.outer_ball)
      for (PointId p : c.members) {
        const double d = space.dist(c.center, p);
        if (!(d < c.side)) {
          rep.outer_ball = false;
          rep.witnesses.push_back({c.id, p, d, "member outside B(center, side)"});
          break;
        }
      }
    if (rep.inner_ball) {
      const double r = tree.c0_target * c.side;
      for (PointId p = 0; p < n; ++p) {
        const double d = space.dist(c.center, p);
        if (d < r && !std::binary_search(c.members.begin(), c.members.end(), p)) {
          rep.inner_ball = false;
          rep.witnesses.push_back({c.id, p, d, "point of B(center, c0 side) outside the cube"});
          break;
        }
      }
    }
    if (rep.mass_consistent) {
      double m = 0.0;
      for (PointId p : c.members) m += space.weight(p);
      if (std::abs(m - c.mass) > 1e-12 * std::max(1.0, space.total_mass())) {
        rep.mass_consistent = false;
        rep.witnesses.push_back({c.id, c.center, m - c.mass, "stored mass differs from member weights"});
      }
    }
  }

  for (std::size_t li = 0; li < nlev && rep.centers_are_nets; ++li) {
    std::vector<PointId> centers;
    for (CubeId id : tree.by_level[li]) centers.push_back(tree.cubes[id].center);
    std::sort(centers.begin(), centers.end());
    if (centers != tree.nets.levels[li]) {
      rep.centers_are_nets = false;
      rep.witnesses.push_back({tree.by_level[li].empty() ? 0 : tree.by_level[li].front(), 0, 0.0,
                               "level centers differ from the net"});
    }
  }
  return rep;
}

}  // namespace rectilib
