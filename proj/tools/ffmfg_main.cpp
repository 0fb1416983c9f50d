#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ffmfg/config.hpp"
#include "ffmfg/io.hpp"
#include "ffmfg/runner.hpp"
#include "ffmfg/verify.hpp"

namespace {

using namespace ffmfg;

std::optional<config::Document> load(const std::string& path, int& code) {
  try {
    return config::load_document(path);
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    code = runner::kConfigError;
  } catch (const io::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    code = runner::kIoError;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward-forward mean-field game solver with congestion"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  runner::AnalyzeInputs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Print closed-form quantities at one state");
  cmd_analyze->add_option("--alpha", analyze.alpha, "Congestion exponent in (0, 2)");
  cmd_analyze->add_option("--a", analyze.a, "Entropy exponent a (a < 0 or a > 1)");
  cmd_analyze->add_option("--s", analyze.s, "Exponent of z");
  cmd_analyze->add_option("--r", analyze.r, "Exponent of w");
  cmd_analyze->add_option("--v", analyze.v, "Velocity-like variable v");
  cmd_analyze->add_option("--m", analyze.m, "Density m > 0");

  auto* cmd_simulate = app.add_subcommand("simulate", "Run one configuration");
  auto* cmd_wave = app.add_subcommand("wave-test", "Traveling-wave convergence study");

  verify::Options verify_options;
  auto* cmd_verify = app.add_subcommand("verify", "Oracle and property self-checks");
  cmd_verify->add_option("--entropy-tol", verify_options.entropy_tol,
                         "Relative tolerance of the entropy-flux residual");

  auto* cmd_sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");

  for (auto* sub : {cmd_analyze, cmd_simulate, cmd_wave, cmd_verify, cmd_sweep}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return runner::kConfigError;
  }

  if (*cmd_analyze) return runner::run_analyze(analyze, std::cout, std::cerr);
  if (*cmd_verify) return verify::run_verify(verify_options, std::cout);

  if (*cmd_wave) {
    config::RunConfig cfg = runner::default_wave_config();
    if (!config_path.empty()) {
      int code = 0;
      auto doc = load(config_path, code);
      if (!doc) return code;
      cfg = doc->run;
    }
    return runner::run_wave_test(cfg, quiet, std::cout, std::cerr);
  }

  if (config_path.empty()) {
    std::cerr << "config error: --config is required for this subcommand\n";
    return runner::kConfigError;
  }
  int code = 0;
  auto doc = load(config_path, code);
  if (!doc) return code;
  const std::filesystem::path dir = out_dir.empty() ? doc->run.output.dir : out_dir;

  if (*cmd_simulate) return runner::run_simulate(doc->run, dir, quiet, std::cout, std::cerr);
  return runner::run_sweep(*doc, dir, quiet, std::cout, std::cerr);
}
