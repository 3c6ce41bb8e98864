#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <optional>
#include <string>
#include <vector>

#include "rectilib/cubes.hpp"
#include "rectilib/porosity.hpp"
#include "rectilib/space.hpp"

namespace rectilib {

using VertexId = std::size_t;

/// Ground vertices are space points. A lifted vertex is the top of one leg of
/// the bridge over the pair (lo, hi), lo < hi, standing above `foot`.
struct Vertex {
  bool lifted = false;
  PointId foot = 0;
  PointId lo = 0;
  PointId hi = 0;

  static Vertex ground(PointId p) { return {false, p, p, p}; }
  static Vertex top(PointId lo, PointId hi, PointId foot) { return {true, foot, lo, hi}; }
  /// Lexicographic key: ground before lifted, then (lo, hi, foot).
  auto key() const { return std::tuple(lifted, lo, hi, foot); }
  bool operator==(const Vertex&) const = default;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
  std::optional<CubeId> cube;  // absent: E-adjacency
};

struct BridgeRecord {
  CubeId cube = 0;
  int level = 0;
  std::size_t net_points = 0;  // |X_{n+n0} ∩ B(center, M side)|
  std::size_t bridges = 0;     // bridges first introduced by this cube
};

struct BridgeGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<BridgeRecord> records;
  std::vector<CubeId> skipped;  // porous cubes whose bridge level is not built
  std::size_t bridge_count = 0;

  std::map<std::tuple<bool, PointId, PointId, PointId>, VertexId> index;

  VertexId add(const Vertex& v);
  std::optional<VertexId> find(const Vertex& v) const;
};

struct BridgeOptions {
  /// Star on the cube center instead of all pairs.
  bool spanning = false;
  /// Guard against quadratic blow-up of complete pairing.
  std::size_t max_bridges = 2'000'000;
};

/// For each porous cube at level n: bridges between the points of
/// X_{n+n0} ∩ B(center, M side). Each bridge adds three edges of length
/// dist(x, y). Pairs already bridged by an earlier cube are not repeated.
BridgeGraph build_bridges(const CubeTree& tree, const MetricMeasureSpace& space,
                          const std::vector<PorousCube>& family, const PorosityConfig& cfg,
                          const BridgeOptions& options = {});

/// Adds E and all bridge feet as ground vertices and joins ground vertices at
/// distance < eps_res. Vertices of the result are in lexicographic key order.
BridgeGraph assemble_gamma(const MetricMeasureSpace& space, const TargetSet& e,
                           const BridgeGraph& bridges, double eps_res);

struct Connectivity {
  std::size_t components = 0;
  /// component[v]: index of v's component; components are numbered by their
  /// smallest vertex.
  std::vector<std::size_t> component;
  std::vector<std::size_t> sizes;
};

Connectivity connectivity(const BridgeGraph& gamma);

struct LengthBudget {
  double e_part = 0.0;
  double bridge_part = 0.0;
  double mu_e = 0.0;
  double bound_e = 0.0;
  double c_pair = 0.0;
  double side_sum = 0.0;  // over the porous family
  double bound_bridge = 0.0;
  bool precondition = true;  // mu(B(x, r)) >= 2r on E at the given radii
  bool inequalities_hold = true;
  bool ok = true;  // vacuously true when the precondition fails
  // Porous cubes with mu(cube) >= 2 side, and their sums.
  std::size_t scale_cubes = 0;
  double scale_side_sum = 0.0;
  double scale_mass_sum = 0.0;
  bool scale_half_ok = true;
  double mass_sum = 0.0;  // over the porous family
};

LengthBudget length_budget(const BridgeGraph& gamma, const MetricMeasureSpace& space,
                           const TargetSet& e, const std::vector<PorousCube>& family,
                           const CubeTree& tree, const PorosityConfig& cfg,
                           const std::vector<double>& radii);

struct CurveParametrization {
  std::vector<VertexId> visits;
  std::vector<double> t;
  std::vector<double> steps;  // steps[i]: length of the edge visits[i] -> visits[i+1]
  double tree_length = 0.0;
  double lip_bound = 0.0;
};

/// Minimum spanning tree (ties: lexicographic endpoint ids) walked depth
/// first from vertex 0, children in ascending id, each tree edge twice.
CurveParametrization parametrize(const BridgeGraph& gamma);

struct ParamCheck {
  bool surjective = true;
  std::size_t missing = 0;
  bool monotone = true;
  std::size_t pairs_checked = 0;
  double max_ratio = 0.0;
  bool lipschitz = true;
  std::optional<std::pair<double, double>> witness;  // (s, t)
  double witness_displacement = 0.0;

  bool ok() const noexcept { return surjective && monotone && lipschitz; }
};

/// Exact surjectivity over vertices, every breakpoint step, and
/// `sample_pairs` random parameter pairs measured in the graph metric.
/// Parameter gaps carry an extra 2^-52, the resolution of t near 1.
ParamCheck check_parametrization(const CurveParametrization& param, const BridgeGraph& gamma,
                                 std::size_t sample_pairs, std::uint64_t seed = 1);

/// Single-source shortest path lengths over the graph.
std::vector<double> graph_distances(const BridgeGraph& gamma, VertexId source);

std::string vertex_name(const MetricMeasureSpace& space, const Vertex& v);

}  // namespace rectilib
