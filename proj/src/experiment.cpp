#include "thdsim/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thdsim/errors.hpp"
#include "thdsim/io.hpp"

namespace thdsim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&key](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("config: unknown field " + path + "." + key);
    }
  }
}

std::complex<double> get_complex(const json& obj, const char* key, const std::string& path,
                                 std::complex<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj[key];
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("config: " + path + "." + key + " must be a number or [re, im]");
}

json complex_to_json(std::complex<double> z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

StateSpec parse_state(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("config: " + path + " must be an object");
  check_keys(j, {"kind", "n", "dim", "alpha", "xi", "parity", "path"}, path);
  StateSpec s;
  s.kind = j.value("kind", std::string{});
  s.dim = j.value("dim", 40);
  s.n = j.value("n", 0);
  s.alpha = get_complex(j, "alpha", path, {0.0, 0.0});
  s.xi = get_complex(j, "xi", path, {0.0, 0.0});
  s.parity = j.value("parity", 1);
  s.path = j.value("path", std::string{});
  if (s.kind != "vacuum" && s.kind != "fock" && s.kind != "coherent" && s.kind != "squeezed" &&
      s.kind != "cat" && s.kind != "json_file") {
    throw ConfigError("config: " + path + ".kind must be one of vacuum|fock|coherent|squeezed|cat|json_file");
  }
  return s;
}

json state_to_json_spec(const StateSpec& s) {
  json j;
  j["kind"] = s.kind;
  if (s.kind == "json_file") {
    j["path"] = s.path;
    return j;
  }
  j["dim"] = s.dim;
  if (s.kind == "fock") j["n"] = s.n;
  if (s.kind == "coherent" || s.kind == "cat") j["alpha"] = complex_to_json(s.alpha);
  if (s.kind == "squeezed") j["xi"] = complex_to_json(s.xi);
  if (s.kind == "cat") j["parity"] = s.parity;
  return j;
}

}  // namespace

QuantumState StateSpec::build() const {
  if (kind == "vacuum") return make_vacuum(dim);
  if (kind == "fock") return make_fock(n, dim);
  if (kind == "coherent") return make_coherent(alpha, dim);
  if (kind == "squeezed") return make_squeezed(xi, dim);
  if (kind == "cat") return make_cat(alpha, parity, dim);
  if (kind == "json_file") {
    std::ifstream in(path);
    if (!in) throw ConfigError("state json_file not readable: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return state_from_json(ss.str());
  }
  throw ConfigError("state kind not recognized: " + kind);
}

TemporalMode ModeSpec::build() const {
  const Eigen::VectorXd t = uniform_time_grid(bins, dt);
  if (shape == "gaussian") return make_gaussian_mode(center, width, t);
  if (shape == "double_exponential") return make_double_exponential_mode(center, rate, t);
  if (shape == "custom") {
    if (static_cast<int>(samples.size()) != bins) {
      throw ConfigError("config: mode.samples length must equal mode.bins");
    }
    return make_custom_mode(
        Eigen::Map<const Eigen::VectorXd>(samples.data(), samples.size()), t);
  }
  throw ConfigError("mode shape not recognized: " + shape);
}

ThetaSchedule ThetaSpec::build() const {
  if (schedule == "fixed") return ThetaSchedule::fixed(value);
  if (schedule == "uniform_scan") return ThetaSchedule::uniform_scan(count);
  if (schedule == "list") return ThetaSchedule::list(values);
  throw ConfigError("theta schedule not recognized: " + schedule);
}

void ExperimentConfig::validate() const {
  state.build();
  background.build();
  const TemporalMode m = mode.build();
  theta.build();
  if (traces < 1) throw ConfigError("config: traces must be >= 1");
  if (gain <= 0.0) throw ConfigError("config: gain must be positive");
  error_model.validate();
  if (std::abs(error_model.measurement_mode_offset) >= m.t()[m.bins() - 1] - m.t()[0]) {
    throw ConfigError("config: error_model.measurement_mode_offset moves the analysis mode off the grid");
  }
  if (save_traces != "none" && save_traces != "csv" && save_traces != "binary" &&
      save_traces != "both") {
    throw ConfigError("config: save_traces must be none|csv|binary|both");
  }
  for (size_t i = 0; i < analyses.size(); ++i) {
    const auto& a = analyses[i];
    const std::string path = "analyses[" + std::to_string(i) + "]";
    if (a.type != "variance_map" && a.type != "marginal" &&
        a.type != "bhattacharyya_vs_analytic" && a.type != "principal_mode" && a.type != "mle") {
      throw ConfigError("config: " + path + ".type not recognized: " + a.type);
    }
    if (a.type == "marginal" || a.type == "bhattacharyya_vs_analytic") {
      if (a.bins < 1) throw ConfigError("config: " + path + ".bins must be >= 1");
      if (!(a.range.first < a.range.second)) {
        throw ConfigError("config: " + path + ".range must satisfy lo < hi");
      }
    }
    if (a.type == "mle") {
      if (a.dim < 2) throw ConfigError("config: " + path + ".dim must be >= 2");
      if (a.max_iter < 1) throw ConfigError("config: " + path + ".max_iter must be >= 1");
      if (a.tol <= 0.0) throw ConfigError("config: " + path + ".tol must be positive");
    }
  }
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j,
             {"state", "mode", "background", "theta", "traces", "gain", "seed", "error_model",
              "save_traces", "analyses", "output_dir"},
             "config");

  ExperimentConfig c;
  if (!j.contains("state")) throw ConfigError("config: missing state");
  c.state = parse_state(j["state"], "state");
  if (j.contains("background")) {
    c.background = parse_state(j["background"], "background");
  } else {
    c.background.kind = "vacuum";
    c.background.dim = c.state.dim;
  }

  if (!j.contains("mode") || !j["mode"].is_object()) throw ConfigError("config: missing mode");
  {
    const json& m = j["mode"];
    check_keys(m, {"shape", "center", "width", "rate", "samples", "bins", "dt"}, "mode");
    c.mode.shape = m.value("shape", std::string{"gaussian"});
    c.mode.center = m.value("center", 0.0);
    c.mode.width = m.value("width", 0.0);
    c.mode.rate = m.value("rate", 0.0);
    if (m.contains("samples")) c.mode.samples = m["samples"].get<std::vector<double>>();
    c.mode.bins = m.value("bins", 256);
    c.mode.dt = m.value("dt", 1e-9);
  }

  if (j.contains("theta")) {
    const json& t = j["theta"];
    check_keys(t, {"schedule", "value", "count", "values"}, "theta");
    c.theta.schedule = t.value("schedule", std::string{"fixed"});
    c.theta.value = t.value("value", 0.0);
    c.theta.count = t.value("count", 0);
    if (t.contains("values")) c.theta.values = t["values"].get<std::vector<double>>();
  }

  c.traces = j.value("traces", 1000);
  c.gain = j.value("gain", 1.0);
  c.seed = j.value("seed", static_cast<uint64_t>(1));
  if (j.contains("error_model")) {
    const json& e = j["error_model"];
    check_keys(e, {"timing_jitter_sigma", "phase_jitter_sigma", "measurement_mode_offset"},
               "error_model");
    c.error_model.timing_jitter_sigma = e.value("timing_jitter_sigma", 0.0);
    c.error_model.phase_jitter_sigma = e.value("phase_jitter_sigma", 0.0);
    c.error_model.measurement_mode_offset = e.value("measurement_mode_offset", 0.0);
  }
  c.save_traces = j.value("save_traces", std::string{"none"});
  if (j.contains("analyses")) {
    if (!j["analyses"].is_array()) throw ConfigError("config: analyses must be an array");
    for (size_t i = 0; i < j["analyses"].size(); ++i) {
      const json& a = j["analyses"][i];
      const std::string path = "analyses[" + std::to_string(i) + "]";
      check_keys(a, {"type", "bins", "range", "dim", "max_iter", "tol"}, path);
      AnalysisRequest req;
      req.type = a.value("type", std::string{});
      req.bins = a.value("bins", 80);
      if (a.contains("range")) {
        if (!a["range"].is_array() || a["range"].size() != 2) {
          throw ConfigError("config: " + path + ".range must be [lo, hi]");
        }
        req.range = {a["range"][0].get<double>(), a["range"][1].get<double>()};
      }
      req.dim = a.value("dim", 15);
      req.max_iter = a.value("max_iter", 2000);
      req.tol = a.value("tol", 1e-8);
      c.analyses.push_back(std::move(req));
    }
  }
  c.output_dir = j.value("output_dir", std::string{"out"});
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["state"] = state_to_json_spec(c.state);
  j["background"] = state_to_json_spec(c.background);
  {
    json m;
    m["shape"] = c.mode.shape;
    m["center"] = c.mode.center;
    if (c.mode.shape == "gaussian") m["width"] = c.mode.width;
    if (c.mode.shape == "double_exponential") m["rate"] = c.mode.rate;
    if (c.mode.shape == "custom") m["samples"] = c.mode.samples;
    m["bins"] = c.mode.bins;
    m["dt"] = c.mode.dt;
    j["mode"] = m;
  }
  {
    json t;
    t["schedule"] = c.theta.schedule;
    if (c.theta.schedule == "fixed") t["value"] = c.theta.value;
    if (c.theta.schedule == "uniform_scan") t["count"] = c.theta.count;
    if (c.theta.schedule == "list") t["values"] = c.theta.values;
    j["theta"] = t;
  }
  j["traces"] = c.traces;
  j["gain"] = c.gain;
  j["seed"] = c.seed;
  j["error_model"] = {{"timing_jitter_sigma", c.error_model.timing_jitter_sigma},
                      {"phase_jitter_sigma", c.error_model.phase_jitter_sigma},
                      {"measurement_mode_offset", c.error_model.measurement_mode_offset}};
  j["save_traces"] = c.save_traces;
  j["analyses"] = json::array();
  for (const auto& a : c.analyses) {
    json e;
    e["type"] = a.type;
    if (a.type == "marginal" || a.type == "bhattacharyya_vs_analytic") {
      e["bins"] = a.bins;
      e["range"] = {a.range.first, a.range.second};
    }
    if (a.type == "mle") {
      e["dim"] = a.dim;
      e["max_iter"] = a.max_iter;
      e["tol"] = a.tol;
    }
    j["analyses"].push_back(e);
  }
  j["output_dir"] = c.output_dir;
  return j;
}

// Fidelity between states of possibly different truncation: embed into the
// larger dimension.
double fidelity_embedded(const QuantumState& a, const QuantumState& b) {
  const int d = std::max(a.dim(), b.dim());
  auto embed = [d](const QuantumState& s) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    rho.topLeftCorner(s.dim(), s.dim()) = s.rho();
    return QuantumState(rho, s.metadata());
  };
  if (a.dim() == b.dim()) return fidelity(a, b);
  return fidelity(embed(a), embed(b));
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) { return config_to_json(c).dump(2); }

RunResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const std::filesystem::path out_dir(config.output_dir);
  std::filesystem::create_directories(out_dir);

  std::vector<ManifestEntry> entries;
  auto track = [&](const std::string& rel) {
    const auto p = out_dir / rel;
    entries.push_back({rel, std::filesystem::file_size(p), sha256_file_hex(p)});
  };

  // The config echo (and its hash) excludes output_dir so runs into different
  // directories stay byte-comparable.
  json cfg_echo = config_to_json(config);
  cfg_echo.erase("output_dir");
  const std::string cfg_text = cfg_echo.dump(2) + "\n";
  {
    std::ofstream f(out_dir / "config.json");
    f << cfg_text;
  }
  track("config.json");
  const std::string cfg_sha = sha256_hex(cfg_text);

  json summary;
  try {
    const QuantumState state = config.state.build();
    const QuantumState background = config.background.build();
    const TemporalMode mode = config.mode.build();
    const ThetaSchedule schedule = config.theta.build();

    TraceEnsemble ensemble =
        simulate_ensemble(state, mode, schedule, background, config.gain, config.error_model,
                          config.traces, config.seed, threads);

    if (config.save_traces == "csv" || config.save_traces == "both") {
      write_ensemble_csv(ensemble, out_dir / "traces.csv");
      track("traces.csv");
    }
    if (config.save_traces == "binary" || config.save_traces == "both") {
      write_ensemble_binary(ensemble, out_dir / "traces.bin");
      track("traces.bin");
    }
    if (config.save_traces != "none") {
      write_ensemble_sidecar(ensemble, out_dir / "traces_meta.json");
      track("traces_meta.json");
    }

    const TemporalMode analysis_mode =
        config.error_model.measurement_mode_offset != 0.0
            ? shift_mode(mode, config.error_model.measurement_mode_offset)
            : mode;
    const std::vector<QuadratureRecord> records = recover_quadratures(ensemble, analysis_mode);
    write_records_csv(records, out_dir / "quadratures.csv");
    track("quadratures.csv");

    {
      double mean = 0.0;
      for (const auto& r : records) mean += r.q;
      mean /= records.size();
      double var = 0.0;
      for (const auto& r : records) var += (r.q - mean) * (r.q - mean);
      var /= std::max<size_t>(1, records.size() - 1);
      summary["recovered_mean"] = mean;
      summary["recovered_variance"] = var;
    }
    summary["traces"] = config.traces;
    summary["bins"] = config.mode.bins;
    summary["seed"] = config.seed;
    summary["state"] = state.metadata().description;
    summary["off_window_traces"] = ensemble.provenance.off_window_traces;

    const std::vector<double> phases = schedule.distinct();
    for (const auto& a : config.analyses) {
      if (a.type == "variance_map") {
        const Eigen::VectorXd var = pointwise_variance(ensemble);
        const double baseline =
            ensemble.gain * ensemble.gain * ensemble.background_variance;
        std::ofstream f(out_dir / "variance.csv");
        f << "t,variance,baseline\n";
        for (int k = 0; k < var.size(); ++k) {
          f << format_double(ensemble.t[k]) << ',' << format_double(var[k]) << ','
            << format_double(baseline) << "\n";
        }
        f.close();
        track("variance.csv");
      } else if (a.type == "marginal") {
        for (size_t i = 0; i < phases.size(); ++i) {
          const auto h = histogram_marginal(
              records, std::pair{phases[i] - 1e-12, phases[i] + 1e-12}, a.bins, a.range);
          const std::string name =
              phases.size() == 1 ? "histogram.csv" : "histogram_" + std::to_string(i) + ".csv";
          std::ofstream f(out_dir / name);
          f << "# theta=" << format_double(phases[i]) << " overflow=" << h.overflow << "\n";
          f << "center,count,pdf\n";
          const Eigen::VectorXd centers = h.centers();
          for (int k = 0; k < h.bins(); ++k) {
            f << format_double(centers[k]) << ',' << h.counts[k] << ','
              << format_double(h.normalized_pdf[k]) << "\n";
          }
          f.close();
          track(name);
        }
      } else if (a.type == "bhattacharyya_vs_analytic") {
        json per_theta = json::array();
        double mean_b = 0.0;
        std::ofstream f(out_dir / "bhattacharyya.csv");
        f << "theta,B\n";
        for (double theta : phases) {
          const auto h = histogram_marginal(records, std::pair{theta - 1e-12, theta + 1e-12},
                                            a.bins, a.range);
          const double b = bhattacharyya(h, marginal(state, theta));
          per_theta.push_back({{"theta", theta}, {"B", b}});
          mean_b += b;
          f << format_double(theta) << ',' << format_double(b) << "\n";
        }
        f.close();
        track("bhattacharyya.csv");
        mean_b /= phases.size();
        summary["bhattacharyya"] = {{"mean", mean_b}, {"per_theta", per_theta}};
      } else if (a.type == "principal_mode") {
        const PrincipalModeResult pm = estimate_principal_mode(ensemble);
        write_mode_csv(pm.mode, out_dir / "principal_mode.csv");
        track("principal_mode.csv");
        {
          std::ofstream f(out_dir / "eigenvalues.csv");
          f << "index,eigenvalue\n";
          for (int k = 0; k < pm.eigenvalues.size(); ++k) {
            f << k << ',' << format_double(pm.eigenvalues[k]) << "\n";
          }
        }
        track("eigenvalues.csv");
        const double ovl = std::abs(overlap(pm.mode, mode));
        summary["principal_mode"] = {
            {"overlap_with_configured_mode", ovl},
            {"lambda1", pm.eigenvalues[0]},
            {"lambda2", pm.eigenvalues.size() > 1 ? pm.eigenvalues[1] : 0.0},
            {"lambda_ratio",
             pm.eigenvalues.size() > 1 ? pm.eigenvalues[1] / pm.eigenvalues[0] : 0.0}};
      } else if (a.type == "mle") {
        MleOptions opt;
        opt.dim = a.dim;
        opt.max_iter = a.max_iter;
        opt.tol = a.tol;
        const MleResult mle = mle_reconstruct(records, opt);
        {
          std::ofstream f(out_dir / "reconstructed_state.json");
          f << state_to_json(mle.state) << "\n";
        }
        track("reconstructed_state.json");
        {
          const PhaseSpaceGrid w = wigner(mle.state, GridSpec{6.0, 121});
          std::ofstream f(out_dir / "reconstructed_wigner.csv");
          f << "x,p,w\n";
          for (int i = 0; i < w.x.size(); ++i) {
            for (int jj = 0; jj < w.p.size(); ++jj) {
              f << format_double(w.x[i]) << ',' << format_double(w.p[jj]) << ','
                << format_double(w.w(i, jj)) << "\n";
            }
          }
        }
        track("reconstructed_wigner.csv");
        summary["mle"] = {
            {"iterations", mle.iterations},
            {"converged", mle.converged},
            {"fidelity_vs_true", fidelity_embedded(mle.state, state)},
            {"fidelity_vs_vacuum", fidelity_embedded(mle.state, make_vacuum(mle.state.dim()))}};
      }
    }

    {
      std::ofstream f(out_dir / "summary.json");
      f << summary.dump(2) << "\n";
    }
    track("summary.json");
  } catch (...) {
    write_manifest(entries, "partial", cfg_sha, out_dir / "manifest.json");
    throw;
  }

  write_manifest(entries, "complete", cfg_sha, out_dir / "manifest.json");
  RunResult result;
  result.output_dir = out_dir;
  result.manifest_sha256 = sha256_file_hex(out_dir / "manifest.json");
  for (const auto& e : entries) result.files.push_back(e.path);
  return result;
}

namespace {

void set_by_path(json& j, const std::string& path, double value) {
  json* node = &j;
  size_t start = 0;
  std::vector<std::string> parts;
  while (true) {
    const size_t dot = path.find('.', start);
    parts.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i])) {
      throw ConfigError("sweep: parameter path not found: " + path);
    }
    node = &(*node)[parts[i]];
  }
  if (!node->is_object() || !node->contains(parts.back())) {
    throw ConfigError("sweep: parameter path not found: " + path);
  }
  (*node)[parts.back()] = value;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return out;
}

}  // namespace

std::vector<SweepPoint> sweep(const ExperimentConfig& base, const std::string& param_path,
                              const std::vector<double>& values, int threads) {
  if (values.empty()) throw ConfigError("sweep: values list must not be empty");
  base.validate();
  std::vector<SweepPoint> points;
  std::vector<json> summaries;
  for (size_t i = 0; i < values.size(); ++i) {
    json j = config_to_json(base);
    set_by_path(j, param_path, values[i]);
    ExperimentConfig sub = parse_config(j.dump());
    sub.seed = base.seed ^ fnv1a64((param_path + ":" + std::to_string(i)).data(),
                                   param_path.size() + 1 + std::to_string(i).size());
    sub.output_dir =
        (std::filesystem::path(base.output_dir) / (sanitize(param_path) + "_" + std::to_string(i)))
            .string();
    const RunResult r = run_experiment(sub, threads);
    points.push_back({values[i], r.output_dir});
    std::ifstream in(r.output_dir / "summary.json");
    json s;
    in >> s;
    summaries.push_back(std::move(s));
  }

  std::filesystem::create_directories(base.output_dir);
  std::ofstream f(std::filesystem::path(base.output_dir) / "sweep_summary.csv");
  f << "value,recovered_variance,bhattacharyya_mean,mle_fidelity_true,mle_fidelity_vacuum\n";
  for (size_t i = 0; i < values.size(); ++i) {
    const json& s = summaries[i];
    f << format_double(values[i]) << ',';
    f << (s.contains("recovered_variance") ? format_double(s["recovered_variance"].get<double>())
                                           : std::string{});
    f << ',';
    f << (s.contains("bhattacharyya")
              ? format_double(s["bhattacharyya"]["mean"].get<double>())
              : std::string{});
    f << ',';
    f << (s.contains("mle") ? format_double(s["mle"]["fidelity_vs_true"].get<double>())
                            : std::string{});
    f << ',';
    f << (s.contains("mle") ? format_double(s["mle"]["fidelity_vs_vacuum"].get<double>())
                            : std::string{});
    f << "\n";
  }
  return points;
}

// ---- Presets -----------------------------------------------------------------

namespace {

// Shared geometry: 256 bins of 1 ns, Gaussian mode sigma_m = 12 ns.
constexpr const char* kFig2 = R"json({
  "state": {"kind": "fock", "n": 1, "dim": 40},
  "mode": {"shape": "gaussian", "center": 0.0, "width": 12e-9, "bins": 256, "dt": 1e-9},
  "background": {"kind": "vacuum", "dim": 40},
  "theta": {"schedule": "fixed", "value": 0.0},
  "traces": 50000,
  "gain": 1.0,
  "seed": 20260801,
  "error_model": {"timing_jitter_sigma": 0.0, "phase_jitter_sigma": 0.0, "measurement_mode_offset": 0.0},
  "save_traces": "none",
  "analyses": [{"type": "variance_map"}],
  "output_dir": "out/fig2"
})json";

constexpr const char* kFig3 = R"json({
  "state": {"kind": "fock", "n": 1, "dim": 40},
  "mode": {"shape": "gaussian", "center": 0.0, "width": 12e-9, "bins": 256, "dt": 1e-9},
  "background": {"kind": "vacuum", "dim": 40},
  "theta": {"schedule": "fixed", "value": 0.0},
  "traces": 50000,
  "gain": 1.0,
  "seed": 20260802,
  "error_model": {"timing_jitter_sigma": 0.0, "phase_jitter_sigma": 0.0, "measurement_mode_offset": 0.0},
  "save_traces": "none",
  "analyses": [{"type": "marginal", "bins": 80, "range": [-5.0, 5.0]},
               {"type": "bhattacharyya_vs_analytic", "bins": 80, "range": [-5.0, 5.0]}],
  "output_dir": "out/fig3"
})json";

// Mode-overlap error: sweep error_model.measurement_mode_offset, e.g.
//   --param error_model.measurement_mode_offset --values 0,4e-9,8e-9,12e-9,18e-9,24e-9
constexpr const char* kFig4a = R"json({
  "state": {"kind": "fock", "n": 1, "dim": 40},
  "mode": {"shape": "gaussian", "center": 0.0, "width": 12e-9, "bins": 256, "dt": 1e-9},
  "background": {"kind": "vacuum", "dim": 40},
  "theta": {"schedule": "fixed", "value": 0.0},
  "traces": 20000,
  "gain": 1.0,
  "seed": 20260803,
  "error_model": {"timing_jitter_sigma": 0.0, "phase_jitter_sigma": 0.0, "measurement_mode_offset": 0.0},
  "save_traces": "none",
  "analyses": [{"type": "bhattacharyya_vs_analytic", "bins": 80, "range": [-6.0, 6.0]}],
  "output_dir": "out/fig4a"
})json";

// Timing jitter: sweep error_model.timing_jitter_sigma over
//   0,6e-9,12e-9,24e-9  (0, 0.5, 1, 2 sigma_m)
constexpr const char* kFig4b = R"json({
  "state": {"kind": "cat", "alpha": 2.0, "parity": 1, "dim": 40},
  "mode": {"shape": "gaussian", "center": 0.0, "width": 12e-9, "bins": 256, "dt": 1e-9},
  "background": {"kind": "vacuum", "dim": 40},
  "theta": {"schedule": "fixed", "value": 0.0},
  "traces": 20000,
  "gain": 1.0,
  "seed": 20260804,
  "error_model": {"timing_jitter_sigma": 0.0, "phase_jitter_sigma": 0.0, "measurement_mode_offset": 0.0},
  "save_traces": "none",
  "analyses": [{"type": "bhattacharyya_vs_analytic", "bins": 80, "range": [-6.0, 6.0]}],
  "output_dir": "out/fig4b"
})json";

// Phase jitter: sweep error_model.phase_jitter_sigma, e.g. 0,0.1,0.2,0.3,0.5
constexpr const char* kFig4c = R"json({
  "state": {"kind": "cat", "alpha": 2.0, "parity": 1, "dim": 40},
  "mode": {"shape": "gaussian", "center": 0.0, "width": 12e-9, "bins": 256, "dt": 1e-9},
  "background": {"kind": "vacuum", "dim": 40},
  "theta": {"schedule": "fixed", "value": 1.5707963267948966},
  "traces": 20000,
  "gain": 1.0,
  "seed": 20260805,
  "error_model": {"timing_jitter_sigma": 0.0, "phase_jitter_sigma": 0.0, "measurement_mode_offset": 0.0},
  "save_traces": "none",
  "analyses": [{"type": "bhattacharyya_vs_analytic", "bins": 80, "range": [-6.0, 6.0]}],
  "output_dir": "out/fig4c"
})json";

// Tomography under timing jitter: sweep error_model.timing_jitter_sigma over
//   0,12e-9,24e-9,60e-9  (0, 1, 2, 5 sigma_m)
constexpr const char* kFig5 = R"json({
  "state": {"kind": "cat", "alpha": 2.0, "parity": 1, "dim": 40},
  "mode": {"shape": "gaussian", "center": 0.0, "width": 12e-9, "bins": 256, "dt": 1e-9},
  "background": {"kind": "vacuum", "dim": 40},
  "theta": {"schedule": "uniform_scan", "count": 12},
  "traces": 100000,
  "gain": 1.0,
  "seed": 20260806,
  "error_model": {"timing_jitter_sigma": 0.0, "phase_jitter_sigma": 0.0, "measurement_mode_offset": 0.0},
  "save_traces": "none",
  "analyses": [{"type": "mle", "dim": 20, "max_iter": 2000, "tol": 1e-8}],
  "output_dir": "out/fig5"
})json";

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig5"};
}

std::string preset_config(const std::string& name) {
  if (name == "fig2") return kFig2;
  if (name == "fig3") return kFig3;
  if (name == "fig4a") return kFig4a;
  if (name == "fig4b") return kFig4b;
  if (name == "fig4c") return kFig4c;
  if (name == "fig5") return kFig5;
  throw ConfigError("unknown preset: " + name + " (available: fig2 fig3 fig4a fig4b fig4c fig5)");
}

}  // namespace thdsim
