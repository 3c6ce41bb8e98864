#include "rectilib/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rectilib/errors.hpp"

namespace rectilib::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

double number_at(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  if (!parse_number(s, v))
    throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    rows.push_back(split_csv(line));
  }
  return rows;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

template <class Fn>
MetricMeasureSpace wrap_build(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

MetricMeasureSpace load_points_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw InputError(path.string() + ": empty file");
  const auto& header = rows.front();
  if (header.size() < 3 || header.front() != "id" || header.back() != "weight")
    throw InputError(path.string() + ": header must be id,x1,...,xd,weight");
  const std::size_t dim = header.size() - 2;
  std::vector<double> coords, weights;
  std::vector<std::string> labels;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size())
      throw InputError(path.string() + ":" + std::to_string(r + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    labels.push_back(row.front());
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(number_at(row[1 + k], path, r + 1));
    weights.push_back(number_at(row.back(), path, r + 1));
  }
  if (weights.empty()) throw InputError(path.string() + ": no points");
  return wrap_build(path, [&] {
    return MetricMeasureSpace::from_coords(dim, std::move(coords), std::move(weights),
                                           std::move(labels));
  });
}

MetricMeasureSpace load_points_json(const std::filesystem::path& path) {
  json doc = read_json(path);
  const json& arr = doc.is_object() && doc.contains("points") ? doc["points"] : doc;
  if (!arr.is_array() || arr.empty()) throw InputError(path.string() + ": expected a point array");
  std::size_t dim = 0;
  std::vector<double> coords, weights;
  std::vector<std::string> labels;
  try {
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& rec = arr[i];
      const auto& c = rec.at("coords");
      if (i == 0) dim = c.size();
      if (c.size() != dim || dim == 0)
        throw InputError(path.string() + ": record " + std::to_string(i) + " has wrong dimension");
      for (const auto& x : c) coords.push_back(x.get<double>());
      weights.push_back(rec.at("weight").get<double>());
      const json& id = rec.contains("id") ? rec["id"] : json(i);
      labels.push_back(id.is_string() ? id.get<std::string>() : id.dump());
    }
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return wrap_build(path, [&] {
    return MetricMeasureSpace::from_coords(dim, std::move(coords), std::move(weights),
                                           std::move(labels));
  });
}

MetricMeasureSpace load_points(const std::filesystem::path& path) {
  return path.extension() == ".json" ? load_points_json(path) : load_points_csv(path);
}

MetricMeasureSpace load_matrix(const std::filesystem::path& matrix_path,
                               const std::filesystem::path& weights_path) {
  const auto mrows = read_rows(matrix_path);
  const std::size_t n = mrows.size();
  if (n == 0) throw InputError(matrix_path.string() + ": empty matrix");
  std::vector<double> matrix;
  matrix.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (mrows[r].size() != n)
      throw InputError(matrix_path.string() + ":" + std::to_string(r + 1) + ": matrix is not square");
    for (const auto& cell : mrows[r]) matrix.push_back(number_at(cell, matrix_path, r + 1));
  }

  auto wrows = read_rows(weights_path);
  std::vector<std::string> labels;
  std::vector<double> weights;
  double probe = 0.0;
  const bool header = !wrows.empty() && !parse_number(wrows.front().back(), probe);
  for (std::size_t r = header ? 1 : 0; r < wrows.size(); ++r) {
    const auto& row = wrows[r];
    if (row.size() == 2) labels.push_back(row.front());
    else if (row.size() != 1)
      throw InputError(weights_path.string() + ":" + std::to_string(r + 1) + ": expected weight or id,weight");
    weights.push_back(number_at(row.back(), weights_path, r + 1));
  }
  if (weights.size() != n)
    throw InputError(weights_path.string() + ": " + std::to_string(weights.size()) +
                     " weights for a " + std::to_string(n) + "-point matrix");
  if (!labels.empty() && labels.size() != n) throw InputError(weights_path.string() + ": mixed row formats");
  return wrap_build(matrix_path, [&] {
    return MetricMeasureSpace::from_matrix(std::move(matrix), std::move(weights), std::move(labels));
  });
}

void write_points_csv(const MetricMeasureSpace& space, const std::filesystem::path& path) {
  if (!space.has_coords()) throw UnsupportedMetricError("points CSV needs coordinates");
  auto out = open_out(path);
  out << "id";
  for (std::size_t k = 0; k < space.dim(); ++k) out << ",x" << (k + 1);
  out << ",weight\n";
  for (PointId p = 0; p < space.size(); ++p) {
    out << space.label(p);
    for (double x : space.coords(p)) out << ',' << x;
    out << ',' << space.weight(p) << '\n';
  }
}

void write_gamma_csv(const MetricMeasureSpace& space, const BridgeGraph& gamma,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "u,v,length,provenance\n";
  for (const Edge& e : gamma.edges) {
    out << vertex_name(space, gamma.vertices[e.u]) << ',' << vertex_name(space, gamma.vertices[e.v])
        << ',' << e.length << ',';
    if (e.cube) out << *e.cube;
    else out << 'E';
    out << '\n';
  }
}

void write_param_csv(const MetricMeasureSpace& space, const BridgeGraph& gamma,
                     const CurveParametrization& param, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,vertex";
  for (std::size_t k = 0; k < space.dim(); ++k) out << ",x" << (k + 1);
  out << '\n';
  for (std::size_t i = 0; i < param.visits.size(); ++i) {
    const Vertex& v = gamma.vertices[param.visits[i]];
    out << param.t[i] << ',' << vertex_name(space, v);
    for (std::size_t k = 0; k < space.dim(); ++k) {
      out << ',';
      if (!v.lifted) out << space.coords(v.foot)[k];
    }
    out << '\n';
  }
}

void write_json(const json& doc, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec s;
  try {
    s.kind = parse_generator_kind(j.at("kind").get<std::string>());
    s.resolution = j.at("resolution").get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("params"))
      for (const auto& [name, value] : j["params"].items()) {
        std::vector<double> vals;
        if (value.is_number()) {
          vals.push_back(value.get<double>());
        } else {
          for (const auto& v : value) {
            if (v.is_array())
              for (const auto& w : v) vals.push_back(w.get<double>());
            else
              vals.push_back(v.get<double>());
          }
        }
        s.params[name] = std::move(vals);
      }
  } catch (const json::exception& e) {
    throw InputError(std::string("generator spec: ") + e.what());
  }
  return s;
}

json to_json(const GeneratorSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = v.size() == 1 ? json(v.front()) : json(v);
  return {{"kind", to_string(spec.kind)}, {"resolution", spec.resolution}, {"params", params},
          {"seed", spec.seed}};
}

json to_json(const MetricMeasureSpace& space, const TargetSet& e) {
  double mu_e = 0.0;
  for (PointId p : e.members) mu_e += space.weight(p);
  return {{"points", space.size()},
          {"dim", space.dim()},
          {"metric", space.has_coords() ? "euclidean" : "matrix"},
          {"total_mass", space.total_mass()},
          {"target",
           {{"size", e.members.size()}, {"mass", mu_e}, {"xi0", space.label(e.xi0)}, {"r0", e.r0}}}};
}

namespace {

json violation_json(const std::optional<NetViolation>& v) {
  if (!v) return nullptr;
  return {{"level", v->level}, {"points", v->points}, {"distance", v->distance}};
}

}  // namespace

json to_json(const NetHierarchy& nets, const NetReport& report) {
  json sizes = json::array();
  for (int n = nets.n_min; n <= nets.n_max; ++n) sizes.push_back(nets.level(n).size());
  return {{"rho", nets.rho},
          {"n_min", nets.n_min},
          {"n_max", nets.n_max},
          {"level_sizes", sizes},
          {"warnings", nets.warnings},
          {"separation", report.separation},
          {"covering", report.covering},
          {"nesting", report.nesting},
          {"separation_witness", violation_json(report.separation_witness)},
          {"covering_witness", violation_json(report.covering_witness)},
          {"nesting_witness", violation_json(report.nesting_witness)}};
}

json to_json(const CubeTree& tree, const CubeReport& report, bool include_cubes) {
  json per_level = json::array();
  for (int n = tree.n_min(); n <= tree.n_max(); ++n) per_level.push_back(tree.level(n).size());
  json witnesses = json::array();
  for (const CubeViolation& w : report.witnesses)
    witnesses.push_back(
        {{"cube", w.cube}, {"point", w.point}, {"distance", w.distance}, {"detail", w.detail}});
  json j = {{"cubes", tree.cubes.size()},
            {"per_level", per_level},
            {"root", tree.root},
            {"c0_target", tree.c0_target},
            {"c0_achieved", tree.c0_achieved},
            {"partition", report.partition},
            {"nesting", report.nesting},
            {"outer_ball", report.outer_ball},
            {"inner_ball", report.inner_ball},
            {"centers_are_nets", report.centers_are_nets},
            {"mass_consistent", report.mass_consistent},
            {"witnesses", witnesses}};
  if (include_cubes) {
    json cubes = json::array();
    for (const Cube& c : tree.cubes)
      cubes.push_back({{"id", c.id},
                       {"level", c.level},
                       {"center", c.center},
                       {"side", c.side},
                       {"parent", c.parent ? json(*c.parent) : json(nullptr)},
                       {"size", c.members.size()},
                       {"mass", c.mass}});
    j["list"] = cubes;
  }
  return j;
}

json to_json(const DensityProfile& profile, const MetricMeasureSpace& space) {
  return {{"point", space.label(profile.point)},
          {"radii", profile.radii},
          {"values", profile.values},
          {"lower_estimate", profile.lower_estimate}};
}

json to_json(const Beta2Result& r) {
  return {{"beta2", r.beta2}, {"point", r.point}, {"direction", r.direction},
          {"diameter", r.diameter}, {"mass", r.mass}};
}

json to_json(const BsSum& s) {
  return {{"sum", s.sum}, {"terms", s.terms}, {"skipped", s.skipped}};
}

json to_json(const LowerMassCheck& c, const MetricMeasureSpace& space) {
  json j = {{"ok", c.ok}, {"checked", c.checked}};
  if (!c.ok)
    j["witness"] = {{"point", space.label(c.witness)}, {"radius", c.radius}, {"mass", c.mass}};
  return j;
}

json to_json(const DoublingEstimate& d, const MetricMeasureSpace& space) {
  return {{"c_hat", d.c_hat},
          {"evaluated", d.evaluated},
          {"skipped", d.skipped},
          {"worst_center", space.label(d.worst_center)},
          {"worst_radius", d.worst_radius}};
}

json to_json(const HausdorffEstimate& h) {
  return {{"upper", h.upper}, {"lower", h.lower}, {"resolution", h.resolution},
          {"balls", h.cover.size()}};
}

json to_json(const ConfigValidation& v) {
  json list = json::array();
  for (const auto& x : v.violations) list.push_back({{"constraint", x.constraint}, {"reason", x.reason}});
  return {{"ok", v.ok}, {"violations", list}};
}

json to_json(const PorosityConfig& cfg) {
  return {{"M", cfg.M}, {"delta", cfg.delta}, {"n0", cfg.n0},
          {"rho", cfg.rho}, {"c0", cfg.c0}, {"C_mu", cfg.C_mu}};
}

json to_json(const std::vector<PorousCube>& family, const MetricMeasureSpace& space) {
  json arr = json::array();
  for (const PorousCube& p : family)
    arr.push_back({{"cube", p.cube}, {"witness", space.label(p.witness)}, {"gap", p.gap}});
  return arr;
}

json to_json(const AppendixConstants& k) {
  return {{"a", k.a}, {"b", k.b}, {"b_mode", k.b_mode}, {"C1", k.C1}};
}

json to_json(const CarlesonReport& r, bool include_entries) {
  json j = {{"ok", r.ok},
            {"worst_ratio", r.worst_ratio},
            {"worst_cube", r.worst_cube},
            {"C1", r.constants.C1},
            {"a", r.constants.a},
            {"b", r.constants.b},
            {"b_observed", r.b_observed},
            {"cubes_checked", r.entries.size()},
            {"skipped", r.skipped}};
  if (include_entries) {
    json arr = json::array();
    for (const auto& e : r.entries)
      arr.push_back({{"cube", e.cube}, {"porous_mass", e.porous_mass}, {"ratio", e.ratio}});
    j["ratios"] = arr;
  }
  return j;
}

json to_json(const ShadowReport& r) {
  json arr = json::array();
  for (const auto& e : r.entries)
    arr.push_back({{"cube", e.cube},
                   {"witness", e.witness},
                   {"shadow", e.shadow ? json(*e.shadow) : json(nullptr)},
                   {"gap", e.gap},
                   {"gap_bound", e.gap_bound},
                   {"side_bound", e.side_bound}});
  return {{"inequalities_ok", r.inequalities_ok},
          {"b_observed", r.b_observed},
          {"resolution_failures", r.resolution_failures},
          {"maximal_empty", r.maximal_empty.size()},
          {"entries", arr}};
}

json to_json(const BridgeGraph& g, const Connectivity& c) {
  std::size_t lifted = 0;
  for (const Vertex& v : g.vertices) lifted += v.lifted;
  json records = json::array();
  for (const auto& r : g.records)
    records.push_back({{"cube", r.cube}, {"level", r.level}, {"net_points", r.net_points},
                       {"bridges", r.bridges}});
  return {{"vertices", g.vertices.size()},
          {"ground_vertices", g.vertices.size() - lifted},
          {"lifted_vertices", lifted},
          {"edges", g.edges.size()},
          {"bridges", g.bridge_count},
          {"skipped_cubes", g.skipped},
          {"components", c.components},
          {"component_sizes", c.sizes},
          {"records", records}};
}

json to_json(const LengthBudget& b) {
  return {{"e_part", b.e_part},
          {"bound_e", b.bound_e},
          {"mu_e", b.mu_e},
          {"bridge_part", b.bridge_part},
          {"c_pair", b.c_pair},
          {"side_sum", b.side_sum},
          {"bound_bridge", b.bound_bridge},
          {"precondition", b.precondition},
          {"inequalities_hold", b.inequalities_hold},
          {"ok", b.ok},
          {"mass_sum", b.mass_sum},
          {"scale_cubes", b.scale_cubes},
          {"scale_side_sum", b.scale_side_sum},
          {"scale_mass_sum", b.scale_mass_sum},
          {"scale_half_ok", b.scale_half_ok}};
}

json to_json(const CurveParametrization& p) {
  return {{"visits", p.visits.size()}, {"tree_length", p.tree_length}, {"lip_bound", p.lip_bound}};
}

json to_json(const ParamCheck& c) {
  json j = {{"ok", c.ok()},
            {"surjective", c.surjective},
            {"missing", c.missing},
            {"monotone", c.monotone},
            {"lipschitz", c.lipschitz},
            {"pairs_checked", c.pairs_checked},
            {"max_ratio", c.max_ratio}};
  if (c.witness)
    j["witness"] = {{"s", c.witness->first}, {"t", c.witness->second},
                    {"displacement", c.witness_displacement}};
  return j;
}

}  // namespace rectilib::io
