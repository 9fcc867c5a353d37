#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "pirs/config.hpp"
#include "pirs/errors.hpp"
#include "pirs/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

void print_frame(const pirs::FrameConfig& f) {
  std::cout << "valid: N=" << f.N << " M=" << f.M << " L=" << f.L() << " blocks=" << f.blocks() << " M0=" << f.M0
            << " bits=" << f.bits << " scheme=" << pirs::to_string(f.scheme) << " basis=" << pirs::to_string(f.basis)
            << " init=" << pirs::to_string(f.init) << "\n"
            << "  P=" << f.P << " W  sigma2=" << f.sigma2 << " W  gamma=" << f.gamma << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive IRS channel estimation and discrete-phase beamforming simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a named experiment and write CSV");
  std::string experiment, config_path, out_path;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  run->add_option("--experiment,-e", experiment, "experiment name (see list-experiments)")->required();
  run->add_option("--config,-c", config_path, "config file (defaults apply when omitted)");
  run->add_option("--trials,-n", trials, "Monte-Carlo trials (overrides the config)");
  run->add_option("--seed,-s", seed, "base seed (overrides the config)");
  run->add_option("--out,-o", out_path, "CSV output path (stdout when omitted)");
  run->add_option("--threads,-j", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "check a config file and report every problem");
  std::string validate_path;
  validate->add_option("path", validate_path, "config file")->required();

  auto* list = app.add_subcommand("list-experiments", "print the experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*list) {
      for (const auto& n : pirs::experiment_names()) std::cout << n << "\t" << pirs::experiment_summary(n) << "\n";
      return 0;
    }
    if (*validate) {
      print_frame(pirs::validate_config(validate_path));
      return 0;
    }

    pirs::ExperimentSpec spec;
    spec.name = experiment;
    if (!config_path.empty()) spec.config = pirs::load_config(config_path);
    spec.trials = trials.value_or(spec.config.trials);
    spec.seed = seed.value_or(spec.config.frame.seed);
    spec.threads = threads;
    if (spec.trials < 1) throw pirs::ConfigError("--trials must be >= 1");

    std::vector<pirs::CsvRow> rows;
    try {
      rows = pirs::run_experiment(spec);
    } catch (const pirs::InvalidArgument& e) {
      // Bad experiment names and grid points are configuration problems.
      throw pirs::ConfigError(e.what());
    }
    if (out_path.empty()) {
      pirs::write_csv(std::cout, rows);
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
      pirs::write_csv(f, rows);
      f.close();
      if (!f) throw std::runtime_error("failed writing '" + out_path + "'");
    }
    return 0;
  } catch (const pirs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
