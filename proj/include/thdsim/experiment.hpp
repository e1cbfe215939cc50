#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thdsim/analysis.hpp"
#include "thdsim/homodyne.hpp"
#include "thdsim/quantum_state.hpp"
#include "thdsim/temporal_mode.hpp"

namespace thdsim {

// ---- Config schema (JSON) --------------------------------------------------
// See README for the documented schema. Parsing is strict: unknown keys and
// out-of-contract values fail with a field-path diagnostic before any
// computation starts.

struct StateSpec {
  std::string kind;  // vacuum | fock | coherent | squeezed | cat | json_file
  int n = 0;
  int dim = 40;
  std::complex<double> alpha{0.0, 0.0};
  std::complex<double> xi{0.0, 0.0};
  int parity = +1;
  std::string path;  // json_file

  QuantumState build() const;
};

struct ModeSpec {
  std::string shape = "gaussian";  // gaussian | double_exponential | custom
  double center = 0.0;
  double width = 0.0;  // gaussian sigma
  double rate = 0.0;   // double_exponential decay rate
  std::vector<double> samples;
  int bins = 256;
  double dt = 1e-9;

  TemporalMode build() const;
};

struct ThetaSpec {
  std::string schedule = "fixed";  // fixed | uniform_scan | list
  double value = 0.0;
  int count = 0;
  std::vector<double> values;

  ThetaSchedule build() const;
};

struct AnalysisRequest {
  std::string type;  // variance_map | marginal | bhattacharyya_vs_analytic |
                     // principal_mode | mle
  int bins = 80;
  std::pair<double, double> range{-6.0, 6.0};
  int dim = 15;
  int max_iter = 2000;
  double tol = 1e-8;
};

struct ExperimentConfig {
  StateSpec state;
  ModeSpec mode;
  StateSpec background;
  ThetaSpec theta;
  int traces = 1000;
  double gain = 1.0;
  uint64_t seed = 1;
  ErrorModel error_model;
  std::string save_traces = "none";  // none | csv | binary | both
  std::vector<AnalysisRequest> analyses;
  std::string output_dir = "out";

  // Validates every referenced operation's preconditions; throws ConfigError
  // with a field path on the first violation.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& c);

// ---- Runner ----------------------------------------------------------------

struct RunResult {
  std::filesystem::path output_dir;
  std::string manifest_sha256;  // hash of manifest.json contents
  std::vector<std::string> files;
};

// Runs one experiment: synthesizes the ensemble, executes every requested
// analysis, writes plot-ready CSV/JSON artifacts plus a manifest listing each
// output file with its content hash. Rerunning the same config and seed
// reproduces identical hashes for any thread count.
RunResult run_experiment(const ExperimentConfig& config, int threads = 1);

struct SweepPoint {
  double value;
  std::filesystem::path output_dir;
};

// One sub-run per value of the dotted parameter path (e.g.
// "error_model.timing_jitter_sigma"), each with a derived sub-seed, plus a
// combined sweep_summary.csv in the parent output directory.
std::vector<SweepPoint> sweep(const ExperimentConfig& base, const std::string& param_path,
                              const std::vector<double>& values, int threads = 1);

// Bundled example configurations (fig2, fig3, fig4a, fig4b, fig4c, fig5).
std::vector<std::string> preset_names();
std::string preset_config(const std::string& name);

}  // namespace thdsim
