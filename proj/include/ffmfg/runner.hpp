#pragma once

// Run orchestration behind the command-line subcommands.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ffmfg/config.hpp"
#include "ffmfg/diagnostics.hpp"
#include "ffmfg/solver.hpp"

namespace ffmfg::runner {

enum ExitCode : int {
  kSuccess = 0,
  kVerifyFailure = 1,
  kConfigError = 2,
  kBlowUp = 3,
  kIoError = 4,
};

State initial_state(const config::RunConfig& cfg, const Grid1D& grid);

diagnostics::MonitorSpec monitor_spec(const config::RunConfig& cfg);

struct RunResult {
  solver::Termination reason = solver::Termination::completed;
  std::size_t steps = 0;
  std::string detail;
  State final_state;
  diagnostics::MonitorRow first_row;
  diagnostics::MonitorRow last_row;
  bool invariants_available = false;
  std::optional<double> wave_error;  // L1 distance of m from the exact translate
  std::optional<diagnostics::MaximumPrincipleReport> max_principle;
};

/// Runs one configuration. With `out_dir`, writes snapshot_<step>.csv files
/// every output.snapshot_every steps (plus the final state) and monitors.csv.
RunResult execute(const config::RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir);

int run_simulate(const config::RunConfig& cfg, const std::filesystem::path& out_dir, bool quiet,
                 std::ostream& out, std::ostream& err);

inline constexpr std::size_t kMaxSweepRuns = 256;

/// Expands the cartesian product of the sweep lists over the base config.
std::vector<config::RunConfig> expand_sweep(const config::Document& doc);

int run_sweep(const config::Document& doc, const std::filesystem::path& out_dir, bool quiet,
              std::ostream& out, std::ostream& err);

struct AnalyzeInputs {
  double alpha = 1.0;
  double a = 2.0;
  double s = -1.0;
  double r = -2.0;
  double v = 1.0;
  double m = 1.0;
};

/// Human-readable table of the closed-form quantities at one point.
std::string analyze_table(const AnalyzeInputs& in);

int run_analyze(const AnalyzeInputs& in, std::ostream& out, std::ostream& err);

struct WaveLevel {
  std::size_t n_cells = 0;
  solver::Termination reason = solver::Termination::completed;
  double l1_error = 0.0;
  double shift_error = 0.0;  // torus distance between measured and predicted phase shift
  double mass_drift = 0.0;   // max |mass(t) - mass(0)| over accepted steps
};

struct WaveStudy {
  std::vector<WaveLevel> levels;
  std::vector<double> orders;  // log2 error ratios between successive levels
  waves::WaveResidual analytic_residual;
};

/// Traveling-wave convergence study at the given resolutions.
WaveStudy wave_convergence(const config::RunConfig& cfg, const std::vector<std::size_t>& cells);

int run_wave_test(const config::RunConfig& cfg, bool quiet, std::ostream& out, std::ostream& err);

/// Default configuration of the monotone wave harness (alpha 0.5, K 1.5, c = 1).
config::RunConfig default_wave_config();

}  // namespace ffmfg::runner
