#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rectilib/cubes.hpp"
#include "rectilib/curve.hpp"
#include "rectilib/density.hpp"
#include "rectilib/generators.hpp"
#include "rectilib/nets.hpp"
#include "rectilib/porosity.hpp"
#include "rectilib/space.hpp"

namespace rectilib::io {

using json = nlohmann::ordered_json;

/// CSV with header `id,x1,...,xd,weight`.
MetricMeasureSpace load_points_csv(const std::filesystem::path& path);

/// JSON array of {"id": ..., "coords": [...], "weight": ...} records, or an
/// object holding that array under "points".
MetricMeasureSpace load_points_json(const std::filesystem::path& path);

/// Dispatches on extension (.json or anything else as CSV).
MetricMeasureSpace load_points(const std::filesystem::path& path);

/// Square numeric CSV matrix plus a weights CSV (one weight per row, or
/// `id,weight` rows with a header; ids then become labels).
MetricMeasureSpace load_matrix(const std::filesystem::path& matrix_path,
                               const std::filesystem::path& weights_path);

void write_points_csv(const MetricMeasureSpace& space, const std::filesystem::path& path);

/// Edge list `u,v,length,provenance` with provenance a cube id or `E`.
void write_gamma_csv(const MetricMeasureSpace& space, const BridgeGraph& gamma,
                     const std::filesystem::path& path);

/// Rows `t,vertex,x1..xd` (coordinates for ground vertices only).
void write_param_csv(const MetricMeasureSpace& space, const BridgeGraph& gamma,
                     const CurveParametrization& param, const std::filesystem::path& path);

void write_json(const json& doc, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

GeneratorSpec generator_from_json(const json& j);
json to_json(const GeneratorSpec& spec);

json to_json(const MetricMeasureSpace& space, const TargetSet& e);
json to_json(const NetHierarchy& nets, const NetReport& report);
json to_json(const CubeTree& tree, const CubeReport& report, bool include_cubes);
json to_json(const DensityProfile& profile, const MetricMeasureSpace& space);
json to_json(const Beta2Result& r);
json to_json(const BsSum& s);
json to_json(const LowerMassCheck& c, const MetricMeasureSpace& space);
json to_json(const DoublingEstimate& d, const MetricMeasureSpace& space);
json to_json(const HausdorffEstimate& h);
json to_json(const ConfigValidation& v);
json to_json(const PorosityConfig& cfg);
json to_json(const std::vector<PorousCube>& family, const MetricMeasureSpace& space);
json to_json(const AppendixConstants& k);
json to_json(const CarlesonReport& r, bool include_entries);
json to_json(const ShadowReport& r);
json to_json(const BridgeGraph& g, const Connectivity& c);
json to_json(const LengthBudget& b);
json to_json(const CurveParametrization& p);
json to_json(const ParamCheck& c);

}  // namespace rectilib::io
