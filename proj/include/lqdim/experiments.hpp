#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lqdim/dimension.hpp"
#include "lqdim/measure_spec.hpp"

namespace lqdim::cli {

enum class ExitCode : int {
  kOk = 0,
  kPreconditionUnmet = 2,
  kInvalidConfig = 3,
  kResourceCap = 4,
};

struct ExperimentConfig {
  std::string experiment;  // improvement | repeated | porous_dual |
                           // infty_jump | regularity | sumset | uniformize
  std::vector<gen::MeasureSpec> measures;
  std::vector<double> qs{2.0};
  std::vector<int> levels;
  double eta = 0.1;    // headroom 1 - eta required of the base exponent
  double sigma = 0.2;  // L^p exponent floor for the smoothing factor
  double p = 2.0;
  double a = 0.0;      // minimal support diameter (0: only reject Diracs)
  std::optional<std::pair<double, double>> check_up;  // regularity: (N, gamma)
  double delta = 0.1;
  int n_max = 4;
  int D = 3;
  int ell = 0;  // 0: derived from the top level
  std::string objective = "count";  // count | lq_norm
  std::uint64_t max_work = kDefaultWorkCap;
  std::uint64_t seed = 0;
  std::string out_dir;
  int max_level = 26;
};

// Parses the JSON config; CLI overrides are applied afterwards. Throws
// SpecError / nlohmann exceptions on malformed input.
ExperimentConfig parse_config(const nlohmann::json& j);

struct CsvRow {
  std::string experiment;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> q;
  std::optional<double> exponent;
  std::optional<double> improvement;
};

struct RunResult {
  ExitCode code = ExitCode::kOk;
  nlohmann::json report;
  std::vector<CsvRow> table;
  // additional artifacts (filename -> body), e.g. the n-fold sumset CSV
  std::vector<std::pair<std::string, std::string>> extra_files;
};

RunResult run_improvement(const ExperimentConfig& cfg);
RunResult run_repeated(const ExperimentConfig& cfg);
RunResult run_porous_dual(const ExperimentConfig& cfg);
RunResult run_infty_jump(const ExperimentConfig& cfg);
RunResult run_regularity(const ExperimentConfig& cfg);
RunResult run_sumset(const ExperimentConfig& cfg);
RunResult run_uniformize(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment.
RunResult run_experiment(const ExperimentConfig& cfg);

// Writes report.json and table.csv into out_dir (created if missing);
// files are written once, atomically, via a rename.
void write_outputs(const RunResult& result, const std::string& out_dir);

std::string csv_table(const std::vector<CsvRow>& rows);

}  // namespace lqdim::cli
