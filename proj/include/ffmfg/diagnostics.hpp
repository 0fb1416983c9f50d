#pragma once

// Runtime monitors for simulated states: mass, L^p norms, entropy integral and
// its viscous dissipation, Riemann-invariant extrema with the invariant-region
// check, and finite-difference residuals of the alpha = 1 wave equations.

#include <optional>
#include <string>
#include <vector>

#include "ffmfg/analysis.hpp"
#include "ffmfg/core.hpp"
#include "ffmfg/solver.hpp"
#include "ffmfg/waves.hpp"

namespace ffmfg::diagnostics {

struct MonitorSpec {
  analysis::EntropyPair entropy{2.0, 0.0};
  analysis::RiemannSpec riemann;
  double lp = 4.0;
  double lq = 4.0;
  /// When set, a state with v <= 0 anywhere is a DomainError; otherwise the
  /// region-dependent fields are NaN for such states.
  bool require_region = false;
};

/// Entropy a = entropy_a with b(alpha, a), invariants z (s) and w (r).
MonitorSpec make_monitor_spec(double alpha, double entropy_a, double s, double r, double lp = 4.0,
                              double lq = 4.0);

struct MonitorRow {
  double t = 0.0;
  double mass = 0.0;
  double min_m = 0.0;
  double min_v = 0.0;
  double max_z = 0.0;
  double max_w = 0.0;
  double entropy = 0.0;
  double dissipation_rhs = 0.0;
  double lp_m = 0.0;
  double lq_v = 0.0;
};

struct MonitorSeries {
  std::vector<MonitorRow> rows;
  MonitorSpec spec;
  double alpha = 1.0;
  double epsilon = 0.0;
};

MonitorRow monitor_row(const State& state, const Grid1D& grid, const ModelParams& params,
                       const MonitorSpec& spec);

/// Collects one row per observed step; hand `observer()` to solver::advance.
class MonitorRecorder {
 public:
  MonitorRecorder(const Grid1D& grid, const ModelParams& params, const MonitorSpec& spec,
                  std::size_t every = 1);

  solver::Observer observer();
  const MonitorSeries& series() const { return series_; }
  MonitorSeries take() { return std::move(series_); }

 private:
  Grid1D grid_;
  ModelParams params_;
  std::size_t every_;
  MonitorSeries series_;
};

struct MaximumPrincipleReport {
  bool passed = false;
  bool rejected = false;  // inviscid run: the invariant-region statement needs epsilon > 0
  double M = 0.0;
  double max_invariant = 0.0;
  double min_m = 0.0;
  double density_bound = 0.0;
  std::optional<std::size_t> witness_row;
  std::string message;
};

MaximumPrincipleReport maximum_principle_check(const MonitorSeries& series, double M, double tol);

struct DissipationReport {
  std::size_t rows_checked = 0;
  std::size_t rows_agreeing = 0;
  double agreement_fraction = 0.0;
  double worst_relative_gap = 0.0;
  bool monotonicity_checked = false;
  bool monotone = true;
  double max_increase = 0.0;
  std::optional<std::size_t> worst_row;
};

/// True when v^a m^b is convex on v > 0, m > 0.
bool is_convex_pair(const analysis::EntropyPair& pair);

DissipationReport entropy_dissipation_check(const MonitorSeries& series, double tol_rel = 0.05,
                                            double abs_floor = 1e-12,
                                            double monotone_tol = 1e-8);

struct SnapshotResidual {
  double t = 0.0;
  double v_equation = 0.0;
  double m_equation = 0.0;
};

/// Central-difference residuals of the alpha = 1 systems written in (v, m)
/// form; q with q_x = m, q_t = v turns them into the scalar wave equations.
std::vector<SnapshotResidual> pde_residual_trajectory(
    const std::vector<State>& snapshots, const Grid1D& grid, const ModelParams& params,
    waves::TimeConvention convention = waves::TimeConvention::conservative);

std::vector<SnapshotResidual> pde_residual_trajectory(
    const solver::Trajectory& traj, const Grid1D& grid, const ModelParams& params,
    waves::TimeConvention convention = waves::TimeConvention::conservative);

double mass(const State& state, const Grid1D& grid);
double l1_distance(const std::vector<double>& a, const std::vector<double>& b, const Grid1D& grid);

}  // namespace ffmfg::diagnostics
