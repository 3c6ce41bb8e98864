#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rectilib/nets.hpp"
#include "rectilib/space.hpp"

namespace rectilib {

using CubeId = std::size_t;

struct Cube {
  CubeId id = 0;
  int level = 0;
  PointId center = 0;  // zeta, a point of X_level
  double side = 0.0;   // 5 rho^level
  std::optional<CubeId> parent;
  std::vector<CubeId> children;
  std::vector<PointId> members;  // sorted ascending
  double mass = 0.0;
};

/// Metric dyadic cubes built by nearest-parent chains over a net hierarchy.
///
/// Cube ids are contiguous per level (coarse to fine) and, within a level,
/// follow ascending center id.
struct CubeTree {
  NetHierarchy nets;
  double c0_target = 1.0 / 500.0;
  double c0_achieved = 0.0;  // +inf when no cube has a foreign point at all
  CubeId root = 0;
  std::vector<Cube> cubes;
  std::vector<std::vector<CubeId>> by_level;  // by_level[n - n_min]
  std::vector<std::vector<CubeId>> owner;     // owner[n - n_min][p]

  int n_min() const noexcept { return nets.n_min; }
  int n_max() const noexcept { return nets.n_max; }
  double rho() const noexcept { return nets.rho; }
  const Cube& cube(CubeId id) const;
  const std::vector<CubeId>& level(int n) const;
  bool is_descendant(CubeId c, CubeId ancestor) const;
};

/// `root_point` picks the top-level cube used as Delta_0 (default: the first).
CubeTree build_cubes(const MetricMeasureSpace& space, const NetHierarchy& nets, double c0_target,
                     std::optional<PointId> root_point = std::nullopt);

/// The unique level-n cube containing p.
CubeId cube_of(const CubeTree& tree, PointId p, int level);

struct CubeViolation {
  CubeId cube = 0;
  PointId point = 0;
  double distance = 0.0;
  std::string detail;
};

struct CubeReport {
  bool partition = true;
  bool nesting = true;
  bool outer_ball = true;
  bool inner_ball = true;  // at c0_target
  bool centers_are_nets = true;
  bool mass_consistent = true;
  std::vector<CubeViolation> witnesses;  // at most one per failed axiom

  bool structural_ok() const noexcept {
    return partition && nesting && outer_ball && centers_are_nets && mass_consistent;
  }
};

/// Checks the member sets actually stored in the tree (not the assignment
/// arrays), so hand-edited trees are judged on what they contain.
CubeReport verify_cube_axioms(const CubeTree& tree, const MetricMeasureSpace& space);

}  // namespace rectilib
