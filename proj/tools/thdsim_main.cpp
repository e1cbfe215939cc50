#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thdsim/errors.hpp"
#include "thdsim/experiment.hpp"

namespace {

// Apply command-line overrides on top of a loaded config.
struct Overrides {
  std::string out_dir;
  bool has_seed = false;
  uint64_t seed = 0;
  int threads = 1;
};

thdsim::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& ov) {
  thdsim::ExperimentConfig cfg = thdsim::load_config(path);
  if (!ov.out_dir.empty()) cfg.output_dir = ov.out_dir;
  if (ov.has_seed) cfg.seed = ov.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thdsim: continuous balanced-homodyne photocurrent simulation and analysis"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  std::string param_path;
  std::vector<double> sweep_values;
  std::string preset_name;
  std::string preset_out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config JSON")->required();
    sub->add_option("--out", ov.out_dir, "output directory (overrides config)")
        ->envname("THDSIM_OUT");
    sub->add_option("--seed", ov.seed, "seed override")->each([&](const std::string&) {
      ov.has_seed = true;
    });
    sub->add_option("--threads", ov.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common(run_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--param", param_path, "dotted config path, e.g. error_model.timing_jitter_sigma")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');

  CLI::App* preset_cmd = app.add_subcommand("preset", "emit a bundled config");
  preset_cmd->add_option("name", preset_name, "fig2|fig3|fig4a|fig4b|fig4c|fig5")->required();
  preset_cmd->add_option("--out", preset_out, "write to file instead of stdout");

  CLI::App* validate_cmd = app.add_subcommand("validate", "validate a config file");
  validate_cmd->add_option("config", config_path, "experiment config JSON")->required();

  try {
    app.parse(argc, argv);

    if (run_cmd->parsed()) {
      const auto cfg = load_with_overrides(config_path, ov);
      const auto result = thdsim::run_experiment(cfg, ov.threads);
      std::cout << "wrote " << result.files.size() << " files to " << result.output_dir.string()
                << "\nmanifest sha256 " << result.manifest_sha256 << "\n";
    } else if (sweep_cmd->parsed()) {
      const auto cfg = load_with_overrides(config_path, ov);
      const auto points = thdsim::sweep(cfg, param_path, sweep_values, ov.threads);
      for (const auto& p : points) {
        std::cout << param_path << "=" << p.value << " -> " << p.output_dir.string() << "\n";
      }
      std::cout << "combined table: " << cfg.output_dir << "/sweep_summary.csv\n";
    } else if (preset_cmd->parsed()) {
      const std::string text = thdsim::preset_config(preset_name);
      if (preset_out.empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream f(preset_out);
        if (!f) throw thdsim::ConfigError("cannot write " + preset_out);
        f << text << "\n";
        std::cout << "wrote " << preset_out << "\n";
      }
    } else if (validate_cmd->parsed()) {
      thdsim::load_config(config_path).validate();
      std::cout << "config ok\n";
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const thdsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const thdsim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
