#include "rectilib/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <limits>
#include <random>
#include <set>

#include "rectilib/density.hpp"
#include "rectilib/errors.hpp"

namespace rectilib {

VertexId BridgeGraph::add(const Vertex& v) {
  auto [it, inserted] = index.emplace(v.key(), vertices.size());
  if (inserted) vertices.push_back(v);
  return it->second;
}

std::optional<VertexId> BridgeGraph::find(const Vertex& v) const {
  auto it = index.find(v.key());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

// Compensated running sum; long walks otherwise drift by more than a step's
// share of the parameter interval.
struct Sum {
  double value = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = value + x;
    carry += std::abs(value) >= std::abs(x) ? (value - t) + x : (x - t) + value;
    value = t;
  }
  double get() const { return value + carry; }
};

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

void add_bridge(BridgeGraph& g, const MetricMeasureSpace& space, PointId x, PointId y,
                CubeId cube) {
  const PointId lo = std::min(x, y), hi = std::max(x, y);
  const double d = space.dist(lo, hi);
  const VertexId a = g.add(Vertex::ground(lo));
  const VertexId b = g.add(Vertex::ground(hi));
  const VertexId a_up = g.add(Vertex::top(lo, hi, lo));
  const VertexId b_up = g.add(Vertex::top(lo, hi, hi));
  g.edges.push_back({a, a_up, d, cube});
  g.edges.push_back({a_up, b_up, d, cube});
  g.edges.push_back({b_up, b, d, cube});
  ++g.bridge_count;
}

}  // namespace

BridgeGraph build_bridges(const CubeTree& tree, const MetricMeasureSpace& space,
                          const std::vector<PorousCube>& family, const PorosityConfig& cfg,
                          const BridgeOptions& options) {
  BridgeGraph g;
  std::vector<PorousCube> order = family;
  std::sort(order.begin(), order.end(),
            [](const PorousCube& a, const PorousCube& b) { return a.cube < b.cube; });

  std::vector<const PorousCube*> active;
  for (const PorousCube& pc : order) {
    const int level = tree.cube(pc.cube).level + cfg.n0;
    if (!tree.nets.has_level(level))
      g.skipped.push_back(pc.cube);
    else
      active.push_back(&pc);
  }

  std::vector<std::vector<PointId>> pts(active.size());
  const long long na = static_cast<long long>(active.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < na; ++i) {
    const Cube& c = tree.cube(active[i]->cube);
    const double reach = cfg.M * c.side;
    for (PointId p : tree.nets.level(c.level + cfg.n0))
      if (space.dist(c.center, p) < reach) pts[i].push_back(p);
  }

  std::set<std::pair<PointId, PointId>> seen;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const Cube& c = tree.cube(active[i]->cube);
    BridgeRecord rec{c.id, c.level, pts[i].size(), 0};
    auto bridge = [&](PointId x, PointId y) {
      if (x == y || !(space.dist(x, y) > 0.0)) return;
      if (!seen.emplace(std::min(x, y), std::max(x, y)).second) return;
      if (g.bridge_count >= options.max_bridges)
        throw ParameterError("bridge count exceeds the limit of " +
                             std::to_string(options.max_bridges) +
                             "; use spanning bridges or a coarser configuration");
      add_bridge(g, space, x, y, c.id);
      ++rec.bridges;
    };
    if (options.spanning) {
      for (PointId p : pts[i]) bridge(c.center, p);
    } else {
      for (std::size_t a = 0; a < pts[i].size(); ++a)
        for (std::size_t b = a + 1; b < pts[i].size(); ++b) bridge(pts[i][a], pts[i][b]);
    }
    g.records.push_back(rec);
  }
  return g;
}

BridgeGraph assemble_gamma(const MetricMeasureSpace& space, const TargetSet& e,
                           const BridgeGraph& bridges, double eps_res) {
  if (!(eps_res > 0.0)) throw ParameterError("eps_res must be positive");
  validate_target(space, e);

  std::vector<Vertex> verts = bridges.vertices;
  for (PointId p : e.members) verts.push_back(Vertex::ground(p));
  std::sort(verts.begin(), verts.end(),
            [](const Vertex& a, const Vertex& b) { return a.key() < b.key(); });
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  BridgeGraph out;
  out.records = bridges.records;
  out.skipped = bridges.skipped;
  out.bridge_count = bridges.bridge_count;
  for (const Vertex& v : verts) out.add(v);

  for (const Edge& ed : bridges.edges) {
    VertexId u = *out.find(bridges.vertices[ed.u]);
    VertexId v = *out.find(bridges.vertices[ed.v]);
    if (v < u) std::swap(u, v);
    out.edges.push_back({u, v, ed.length, ed.cube});
  }

  std::vector<VertexId> ground;
  for (VertexId v = 0; v < out.vertices.size() && !out.vertices[v].lifted; ++v) ground.push_back(v);
  std::vector<std::vector<Edge>> local(ground.size());
  const long long ng = static_cast<long long>(ground.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < ng; ++i) {
    const PointId p = out.vertices[ground[i]].foot;
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < ground.size(); ++j) {
      const double d = space.dist(p, out.vertices[ground[j]].foot);
      if (d < eps_res) local[i].push_back({ground[i], ground[j], d, std::nullopt});
    }
  }
  for (auto& l : local) out.edges.insert(out.edges.end(), l.begin(), l.end());

  std::stable_sort(out.edges.begin(), out.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return out;
}

Connectivity connectivity(const BridgeGraph& gamma) {
  const std::size_t n = gamma.vertices.size();
  DisjointSets ds(n);
  for (const Edge& e : gamma.edges) ds.unite(e.u, e.v);
  Connectivity out;
  out.component.assign(n, 0);
  std::vector<std::size_t> label(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = ds.find(v);
    if (label[r] == n) {
      label[r] = out.components++;
      out.sizes.push_back(0);
    }
    out.component[v] = label[r];
    ++out.sizes[label[r]];
  }
  return out;
}

LengthBudget length_budget(const BridgeGraph& gamma, const MetricMeasureSpace& space,
                           const TargetSet& e, const std::vector<PorousCube>& family,
                           const CubeTree& tree, const PorosityConfig& cfg,
                           const std::vector<double>& radii) {
  LengthBudget b;
  for (const Edge& ed : gamma.edges) (ed.cube ? b.bridge_part : b.e_part) += ed.length;
  for (PointId p : e.members) b.mu_e += space.weight(p);
  b.bound_e = 10.0 * b.mu_e;

  std::size_t max_pairs = 0;
  for (const BridgeRecord& r : gamma.records)
    max_pairs = std::max(max_pairs, r.net_points * (r.net_points - (r.net_points > 0 ? 1 : 0)) / 2);
  b.c_pair = 3.0 * 2.0 * cfg.M * static_cast<double>(max_pairs);
  for (const PorousCube& pc : family) {
    const Cube& c = tree.cube(pc.cube);
    b.side_sum += c.side;
    b.mass_sum += c.mass;
    if (c.mass >= 2.0 * c.side) {
      ++b.scale_cubes;
      b.scale_side_sum += c.side;
      b.scale_mass_sum += c.mass;
    }
  }
  b.bound_bridge = b.c_pair * b.side_sum;
  b.scale_half_ok = b.scale_side_sum <= 0.5 * b.scale_mass_sum;

  b.precondition = lower_mass_check(space, e.members, radii).ok;
  b.inequalities_hold = b.e_part <= b.bound_e && b.bridge_part <= b.bound_bridge;
  b.ok = !b.precondition || b.inequalities_hold;
  return b;
}

CurveParametrization parametrize(const BridgeGraph& gamma) {
  const std::size_t n = gamma.vertices.size();
  if (n == 0) throw ConnectivityError("cannot parametrize an empty graph", 0);
  const Connectivity conn = connectivity(gamma);
  if (conn.components != 1)
    throw ConnectivityError("graph has " + std::to_string(conn.components) + " components",
                            conn.components);

  std::vector<std::size_t> order(gamma.edges.size());
  std::iota(order.begin(), order.end(), 0);
  auto ends = [&](std::size_t i) {
    const Edge& e = gamma.edges[i];
    return std::pair(std::min(e.u, e.v), std::max(e.u, e.v));
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double la = gamma.edges[a].length, lb = gamma.edges[b].length;
    if (la != lb) return la < lb;
    if (ends(a) != ends(b)) return ends(a) < ends(b);
    return a < b;
  });

  CurveParametrization out;
  std::vector<std::vector<std::pair<VertexId, double>>> adj(n);
  DisjointSets ds(n);
  Sum tree_sum;
  for (std::size_t i : order) {
    const Edge& e = gamma.edges[i];
    if (!ds.unite(e.u, e.v)) continue;
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
    tree_sum.add(e.length);
  }
  out.tree_length = tree_sum.get();
  for (auto& a : adj) std::sort(a.begin(), a.end());

  // Iterative depth-first walk; each tree edge is traversed down and back up.
  struct Frame {
    VertexId v;
    std::size_t next;
    double up;  // length of the edge to the parent
  };
  std::vector<Frame> stack{{0, 0, 0.0}};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  out.visits.push_back(0);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < adj[f.v].size()) {
      const auto [w, len] = adj[f.v][f.next++];
      if (seen[w]) continue;
      seen[w] = 1;
      out.steps.push_back(len);
      out.visits.push_back(w);
      stack.push_back({w, 0, len});
    } else {
      const double up = f.up;
      stack.pop_back();
      if (!stack.empty()) {
        out.steps.push_back(up);
        out.visits.push_back(stack.back().v);
      }
    }
  }
  if (out.visits.size() == 1) {
    out.visits.push_back(0);
    out.steps.push_back(0.0);
  }

  const double total = 2.0 * out.tree_length;
  out.lip_bound = total;
  out.t.resize(out.visits.size());
  Sum run;
  for (std::size_t i = 0; i < out.visits.size(); ++i) {
    if (total > 0.0)
      out.t[i] = run.get() / total;
    else
      out.t[i] = static_cast<double>(i) / static_cast<double>(out.visits.size() - 1);
    if (i < out.steps.size()) run.add(out.steps[i]);
  }
  out.t.back() = 1.0;
  return out;
}

namespace {

// Compressed adjacency over `keep` vertices, mapped through `index`.
struct Csr {
  std::vector<std::size_t> start;
  std::vector<std::size_t> to;
  std::vector<double> len;

  Csr(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges)
      : start(n + 1, 0) {
    for (const auto& [u, v, l] : edges) {
      ++start[u + 1];
      ++start[v + 1];
    }
    for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
    to.resize(start.back());
    len.resize(start.back());
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& [u, v, l] : edges) {
      to[fill[u]] = v;
      len[fill[u]++] = l;
      to[fill[v]] = u;
      len[fill[v]++] = l;
    }
  }

  std::vector<double> distances(const std::vector<std::pair<std::size_t, double>>& seeds) const {
    std::vector<double> dist(start.size() - 1, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (const auto& [v, d] : seeds)
      if (d < dist[v]) {
        dist[v] = d;
        pq.emplace(d, v);
      }
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (std::size_t k = start[v]; k < start[v + 1]; ++k)
        if (d + len[k] < dist[to[k]]) {
          dist[to[k]] = d + len[k];
          pq.emplace(dist[to[k]], to[k]);
        }
    }
    return dist;
  }
};

// Shortest paths over Gamma. Bridges are chains foot - top - top - foot, so
// when every lifted vertex has that shape the search runs on the ground
// vertices alone, each bridge collapsing to one edge, and lifted distances
// are read off their two exits.
class Adjacency {
 public:
  explicit Adjacency(const BridgeGraph& g) : n_(g.vertices.size()) {
    std::vector<std::vector<std::pair<VertexId, double>>> nb(n_);
    for (const Edge& e : g.edges) {
      nb[e.u].emplace_back(e.v, e.length);
      nb[e.v].emplace_back(e.u, e.length);
    }
    ground_.assign(n_, kNone);
    std::size_t ng = 0;
    for (VertexId v = 0; v < n_; ++v)
      if (!g.vertices[v].lifted) ground_[v] = ng++;
    foot_.assign(n_, kNone);
    partner_.assign(n_, kNone);
    leg_.assign(n_, 0.0);
    mid_.assign(n_, 0.0);
    bool chains = true;
    for (VertexId v = 0; v < n_ && chains; ++v) {
      if (!g.vertices[v].lifted) continue;
      chains = nb[v].size() == 2;
      for (std::size_t k = 0; chains && k < 2; ++k) {
        const auto [w, l] = nb[v][k];
        if (g.vertices[w].lifted) {
          chains = partner_[v] == kNone;
          partner_[v] = w;
          mid_[v] = l;
        } else {
          chains = foot_[v] == kNone;
          foot_[v] = w;
          leg_[v] = l;
        }
      }
    }
    for (VertexId v = 0; v < n_ && chains; ++v)
      if (g.vertices[v].lifted) chains = partner_[partner_[v]] == v && nb[partner_[v]].size() == 2;

    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    if (chains) {
      for (const Edge& e : g.edges)
        if (ground_[e.u] != kNone && ground_[e.v] != kNone) edges.emplace_back(ground_[e.u], ground_[e.v], e.length);
      for (VertexId v = 0; v < n_; ++v)
        if (g.vertices[v].lifted && v < partner_[v])
          edges.emplace_back(ground_[foot_[v]], ground_[foot_[partner_[v]]],
                             leg_[v] + mid_[v] + leg_[partner_[v]]);
      csr_.emplace(ng, edges);
    } else {
      ground_.clear();
      for (const Edge& e : g.edges) edges.emplace_back(e.u, e.v, e.length);
      csr_.emplace(n_, edges);
    }
  }

  std::vector<double> distances(VertexId source) const {
    if (ground_.empty()) return csr_->distances({{source, 0.0}});
    std::vector<std::pair<std::size_t, double>> seeds;
    if (ground_[source] != kNone) {
      seeds.emplace_back(ground_[source], 0.0);
    } else {
      const VertexId p = partner_[source];
      seeds.emplace_back(ground_[foot_[source]], leg_[source]);
      seeds.emplace_back(ground_[foot_[p]], mid_[source] + leg_[p]);
    }
    const auto dg = csr_->distances(seeds);
    std::vector<double> dist(n_);
    for (VertexId v = 0; v < n_; ++v) {
      if (ground_[v] != kNone) {
        dist[v] = dg[ground_[v]];
        continue;
      }
      const VertexId p = partner_[v];
      dist[v] = std::min(dg[ground_[foot_[v]]] + leg_[v], dg[ground_[foot_[p]]] + leg_[p] + mid_[v]);
    }
    if (ground_[source] == kNone) {
      dist[source] = 0.0;
      dist[partner_[source]] = std::min(dist[partner_[source]], mid_[source]);
    }
    return dist;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t n_;
  std::vector<std::size_t> ground_;  // empty: plain search over all vertices
  std::vector<VertexId> foot_, partner_;
  std::vector<double> leg_, mid_;
  std::optional<Csr> csr_;
};

}  // namespace

std::vector<double> graph_distances(const BridgeGraph& gamma, VertexId source) {
  return Adjacency(gamma).distances(source);
}

namespace {

// A point of the walk: on the step from visits[seg] to visits[seg + 1], at
// distance `off` from visits[seg].
struct Position {
  std::size_t seg;
  double off;
};

Position locate(const CurveParametrization& p, double s) {
  const std::size_t last = p.visits.size() - 2;
  auto it = std::upper_bound(p.t.begin(), p.t.end(), s);
  std::size_t seg = it == p.t.begin() ? 0 : static_cast<std::size_t>(it - p.t.begin()) - 1;
  seg = std::min(seg, last);
  const double span = p.t[seg + 1] - p.t[seg];
  double frac = span > 0.0 ? (s - p.t[seg]) / span : 0.0;
  frac = std::clamp(frac, 0.0, 1.0);
  return {seg, frac * p.steps[seg]};
}

}  // namespace

ParamCheck check_parametrization(const CurveParametrization& param, const BridgeGraph& gamma,
                                 std::size_t sample_pairs, std::uint64_t seed) {
  ParamCheck out;
  std::vector<char> hit(gamma.vertices.size(), 0);
  for (VertexId v : param.visits)
    if (v < hit.size()) hit[v] = 1;
  out.missing = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 0));
  out.surjective = out.missing == 0;
  if (param.visits.size() < 2 || param.t.size() != param.visits.size() ||
      param.steps.size() + 1 != param.visits.size()) {
    out.monotone = false;
    return out;
  }
  out.monotone = param.t.front() == 0.0 && param.t.back() == 1.0 &&
                 std::is_sorted(param.t.begin(), param.t.end());
  if (!out.monotone) return out;

  const double lip = param.lip_bound;
  // Parameter gaps are only resolved to the double spacing just below 1; a
  // breakpoint gap of 1e-7 already carries a relative rounding of ~1e-9.
  const double resolution = std::ldexp(1.0, -52);
  auto record = [&](double s, double t, double disp) {
    ++out.pairs_checked;
    const double dt = std::abs(s - t) + resolution;
    out.max_ratio = std::max(out.max_ratio, disp / dt);
    if (disp > lip * dt * (1.0 + 1e-9) && out.lipschitz) {
      out.lipschitz = false;
      out.witness = std::pair(s, t);
      out.witness_displacement = disp;
    }
  };

  const Adjacency adj(gamma);

  // Breakpoint steps: the walk covers each one along an edge, so only steps
  // whose edge is longer than the budget need the exact metric.
  for (std::size_t i = 0; i + 1 < param.visits.size(); ++i) {
    const double dt = param.t[i + 1] - param.t[i] + resolution;
    double disp = param.steps[i];
    if (disp > lip * dt * (1.0 + 1e-9)) disp = adj.distances(param.visits[i])[param.visits[i + 1]];
    record(param.t[i], param.t[i + 1], disp);
  }

  if (sample_pairs == 0) return out;
  // Draw every parameter up front so the result does not depend on threads.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t anchors =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(double(sample_pairs)))));
  const std::size_t per = (sample_pairs + anchors - 1) / anchors;
  std::vector<double> s_of(anchors);
  std::vector<std::vector<double>> t_of(anchors);
  std::size_t left = sample_pairs;
  for (std::size_t k = 0; k < anchors && left > 0; ++k) {
    s_of[k] = unit(rng);
    const std::size_t m = std::min(per, left);
    for (std::size_t j = 0; j < m; ++j) t_of[k].push_back(unit(rng));
    left -= m;
  }

  std::vector<std::vector<double>> disp_of(anchors);
  const long long na = static_cast<long long>(anchors);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < na; ++k) {
    if (t_of[k].empty()) continue;
    const Position ps = locate(param, s_of[k]);
    const VertexId a = param.visits[ps.seg], b = param.visits[ps.seg + 1];
    const double la = param.steps[ps.seg];
    const auto da = adj.distances(a);
    const auto db = adj.distances(b);
    for (double t : t_of[k]) {
      const Position pt = locate(param, t);
      const VertexId c = param.visits[pt.seg], d = param.visits[pt.seg + 1];
      const double lc = param.steps[pt.seg];
      double disp = std::min({ps.off + da[c] + pt.off, ps.off + da[d] + (lc - pt.off),
                              (la - ps.off) + db[c] + pt.off, (la - ps.off) + db[d] + (lc - pt.off)});
      if (a == c && b == d) disp = std::min(disp, std::abs(ps.off - pt.off));
      if (a == d && b == c) disp = std::min(disp, std::abs(ps.off - (lc - pt.off)));
      disp_of[k].push_back(disp);
    }
  }
  for (std::size_t k = 0; k < anchors; ++k)
    for (std::size_t j = 0; j < t_of[k].size(); ++j) record(s_of[k], t_of[k][j], disp_of[k][j]);
  return out;
}

std::string vertex_name(const MetricMeasureSpace& space, const Vertex& v) {
  if (!v.lifted) return space.label(v.foot);
  return space.label(v.lo) + "~" + space.label(v.hi) + "^" + space.label(v.foot);
}

}  // namespace rectilib
