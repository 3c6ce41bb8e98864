#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rectilib/curve.hpp"
#include "rectilib/errors.hpp"
#include "rectilib/generators.hpp"
#include "rectilib/io.hpp"
#include "rectilib/porosity.hpp"

namespace rectilib {

struct RunConfig {
  std::optional<std::filesystem::path> points;   // point cloud (CSV or JSON)
  std::optional<std::filesystem::path> matrix;   // distance matrix CSV
  std::optional<std::filesystem::path> weights;  // weights for `matrix`
  std::optional<GeneratorSpec> generator;
  std::vector<std::string> target;  // labels of E; empty: generator target or all points

  double rho = 1.0 / 12.0;
  double c0 = 1.0 / 500.0;
  double M = 11.0;
  double delta = 0.3;
  int n0 = 2;
  std::optional<int> n_max;
  std::optional<double> eps_res;     // default 2 max(rho^n_max, widest E spacing)
  std::optional<double> r_lo, r_hi;  // radius grid; default [eps_res, diam E / 4]
  std::optional<double> b;           // supplied shadow multiplicity
  std::optional<double> C_mu;        // supplied doubling constant
  bool strict = false;
  bool force = false;  // run despite validator violations
  bool spanning = false;
  std::size_t max_bridges = 2'000'000;
  std::size_t sample_pairs = 10'000;
  std::uint64_t seed = 1;

  enum class Until { porous, curve, all };
  Until until = Until::all;       // last stage to run
  bool carleson_entries = false;  // per-cube ratios in the report

  std::optional<std::filesystem::path> out_dir;
};

/// Carries the stage name and the exit status the failure maps to.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what, int exit_code)
      : Error(stage + ": " + what), stage_(std::move(stage)), exit_code_(exit_code) {}
  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

struct RunReport {
  io::json report;   // deterministic
  io::json timings;  // wall clock per stage, kept apart from the report
  int exit_code = 0; // 0 ok, 1 invariant failure, 2 input error

  // Retained for callers that want more than the JSON summary.
  MetricMeasureSpace space;
  TargetSet target;
  BridgeGraph gamma;
  std::optional<CurveParametrization> param;
  std::size_t components = 0;
};

/// Validates the configuration, then runs nets, cubes, density, porosity,
/// bridges, assembly, connectivity, length budget and parametrization. When
/// `out_dir` is set, writes report.json, timings.json, gamma.csv and
/// param.csv there.
RunReport run_pipeline(const RunConfig& cfg);

/// Space and target described by the config (file or generator).
Generated load_input(const RunConfig& cfg);

/// Maps a library error to the CLI exit status.
int exit_code_for(const std::exception& e);

}  // namespace rectilib
