#include "ffmfg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ffmfg::diagnostics {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double lp_norm(const std::vector<double>& f, double p, double dx) {
  double acc = 0.0;
  for (double x : f) acc += std::pow(std::abs(x), p);
  return std::pow(acc * dx, 1.0 / p);
}

}  // namespace

MonitorSpec make_monitor_spec(double alpha, double entropy_a, double s, double r, double lp,
                              double lq) {
  MonitorSpec spec;
  spec.entropy = analysis::make_entropy_pair(alpha, entropy_a);
  spec.riemann = analysis::make_riemann_spec(alpha, s, r);
  spec.lp = lp;
  spec.lq = lq;
  return spec;
}

MonitorRow monitor_row(const State& state, const Grid1D& grid, const ModelParams& params,
                       const MonitorSpec& spec) {
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  MonitorRow row;
  row.t = state.t;
  row.mass = mass(state, grid);
  row.min_m = *std::min_element(state.m.begin(), state.m.end());
  row.min_v = *std::min_element(state.v.begin(), state.v.end());
  row.lp_m = lp_norm(state.m, spec.lp, dx);
  row.lq_v = lp_norm(state.v, spec.lq, dx);

  if (!(row.min_v > 0.0)) {
    if (spec.require_region) {
      throw Error(ErrorCode::DomainError, "invariants requested but v <= 0 somewhere at t = " +
                                              std::to_string(state.t));
    }
    row.max_z = row.max_w = row.entropy = row.dissipation_rhs = kNaN;
    return row;
  }

  row.max_z = -std::numeric_limits<double>::infinity();
  row.max_w = -std::numeric_limits<double>::infinity();
  double entropy = 0.0;
  double dissipation = 0.0;
  const double inv2dx = 1.0 / (2.0 * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = state.v[i];
    const double m = state.m[i];
    row.max_z = std::max(row.max_z, analysis::riemann_z(spec.riemann, v, m).value);
    row.max_w = std::max(row.max_w, analysis::riemann_w(spec.riemann, v, m).value);
    const auto eta = analysis::entropy_eval(spec.entropy.a, spec.entropy.b, v, m);
    entropy += eta.value;
    const Vec2 grad{(state.v[grid.neighbor(i, 1)] - state.v[grid.neighbor(i, -1)]) * inv2dx,
                    (state.m[grid.neighbor(i, 1)] - state.m[grid.neighbor(i, -1)]) * inv2dx};
    dissipation += quadratic_form(eta.hessian, grad);
  }
  row.entropy = entropy * dx;
  row.dissipation_rhs = -params.epsilon * dissipation * dx + 0.0;  // no -0 in output
  return row;
}

MonitorRecorder::MonitorRecorder(const Grid1D& grid, const ModelParams& params,
                                 const MonitorSpec& spec, std::size_t every)
    : grid_(grid), params_(params), every_(std::max<std::size_t>(every, 1)) {
  series_.spec = spec;
  series_.alpha = params.alpha;
  series_.epsilon = params.epsilon;
}

solver::Observer MonitorRecorder::observer() {
  return [this](const State& state, double, std::size_t step) {
    if (step % every_ != 0) return;
    series_.rows.push_back(monitor_row(state, grid_, params_, series_.spec));
  };
}

MaximumPrincipleReport maximum_principle_check(const MonitorSeries& series, double M, double tol) {
  MaximumPrincipleReport report;
  report.M = M;
  if (!(series.epsilon > 0.0)) {
    report.rejected = true;
    report.message = "maximum principle applies to viscous runs (epsilon > 0) only";
    return report;
  }
  if (series.rows.empty()) {
    report.message = "empty monitor series";
    return report;
  }
  report.density_bound = analysis::density_lower_bound(M, series.spec.riemann);
  report.max_invariant = -std::numeric_limits<double>::infinity();
  report.min_m = std::numeric_limits<double>::infinity();
  report.passed = true;
  for (std::size_t k = 0; k < series.rows.size(); ++k) {
    const auto& row = series.rows[k];
    const double top = std::max(row.max_z, row.max_w);
    report.max_invariant = std::max(report.max_invariant, top);
    report.min_m = std::min(report.min_m, row.min_m);
    const bool bad = !(top <= M * (1.0 + tol)) || !(row.min_m >= (1.0 - tol) * report.density_bound);
    if (bad && report.passed) {
      report.passed = false;
      report.witness_row = k;
      report.message = "violation at t = " + std::to_string(row.t);
    }
  }
  return report;
}

bool is_convex_pair(const analysis::EntropyPair& pair) {
  const double a = pair.a;
  const double b = pair.b;
  return a * (a - 1.0) >= 0.0 && a * b * (a + b - 1.0) <= 0.0 && b * (b - 1.0) >= 0.0;
}

DissipationReport entropy_dissipation_check(const MonitorSeries& series, double tol_rel,
                                            double abs_floor, double monotone_tol) {
  DissipationReport report;
  const auto& rows = series.rows;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    const double dt = rows[k + 1].t - rows[k - 1].t;
    if (!(dt > 0.0)) continue;
    const double lhs = (rows[k + 1].entropy - rows[k - 1].entropy) / dt;
    const double rhs = rows[k].dissipation_rhs;
    ++report.rows_checked;
    const double gap = std::abs(lhs - rhs);
    const double size = std::max(std::abs(lhs), std::abs(rhs));
    const bool tiny = std::abs(lhs) < abs_floor && std::abs(rhs) < abs_floor;
    const double rel = size > 0.0 ? gap / size : 0.0;
    if (tiny || rel <= tol_rel) {
      ++report.rows_agreeing;
    } else if (rel > report.worst_relative_gap) {
      report.worst_relative_gap = rel;
      report.worst_row = k;
    }
  }
  report.agreement_fraction =
      report.rows_checked == 0 ? 1.0
                               : static_cast<double>(report.rows_agreeing) /
                                     static_cast<double>(report.rows_checked);

  report.monotonicity_checked = is_convex_pair(series.spec.entropy);
  if (report.monotonicity_checked) {
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const double increase = rows[k].entropy - rows[k - 1].entropy;
      report.max_increase = std::max(report.max_increase, increase);
      if (increase > monotone_tol) report.monotone = false;
    }
  }
  return report;
}

std::vector<SnapshotResidual> pde_residual_trajectory(const std::vector<State>& snapshots,
                                                      const Grid1D& grid,
                                                      const ModelParams& params,
                                                      waves::TimeConvention convention) {
  if (params.alpha != 1.0) {
    throw Error(ErrorCode::DomainError, "wave-equation residual is defined for alpha = 1");
  }
  if (snapshots.size() < 3) {
    throw Error(ErrorCode::InsufficientSnapshots, "need at least three snapshots");
  }
  const double dt = snapshots[1].t - snapshots[0].t;
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const double step = snapshots[k].t - snapshots[k - 1].t;
    if (!(dt > 0.0) || std::abs(step - dt) > 1e-9 * dt) {
      throw Error(ErrorCode::InsufficientSnapshots, "snapshots must be uniformly spaced in time");
    }
  }
  const double K = params.effective_K();
  const double dx = grid.dx();
  const std::size_t n = grid.n_cells();
  std::vector<SnapshotResidual> out;
  for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
    const State& prev = snapshots[k - 1];
    const State& cur = snapshots[k];
    const State& next = snapshots[k + 1];
    SnapshotResidual res;
    res.t = cur.t;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t l = grid.neighbor(i, -1);
      const std::size_t r = grid.neighbor(i, 1);
      const double v = cur.v[i];
      const double m = cur.m[i];
      const double v_t = (next.v[i] - prev.v[i]) / (2.0 * dt);
      const double m_t = (next.m[i] - prev.m[i]) / (2.0 * dt);
      const double v_x = (cur.v[r] - cur.v[l]) / (2.0 * dx);
      const double m_x = (cur.m[r] - cur.m[l]) / (2.0 * dx);
      const double transport = (v / m) * v_x;
      const double pressure = v * v / (2.0 * m * m);
      double r_v = 0.0;
      switch (params.coupling) {
        case Coupling::none:
        case Coupling::monotone_ff:
          // q_tt + (q_t/q_x) q_xt - (K + q_t^2/(2 q_x^2)) q_xx
          r_v = v_t + transport - (K + pressure) * m_x;
          break;
        case Coupling::antimonotone:
          if (convention == waves::TimeConvention::conservative) {
            // -v_t + (v^2/(2m) + K m)_x
            r_v = v_t - transport + (pressure - K) * m_x;
          } else {
            // q_tt + (q_t/q_x) q_xt + (K - q_t^2/(2 q_x^2)) q_xx
            r_v = v_t + transport + (K - pressure) * m_x;
          }
          break;
      }
      res.v_equation = std::max(res.v_equation, std::abs(r_v));
      res.m_equation = std::max(res.m_equation, std::abs(m_t - v_x));
    }
    out.push_back(res);
  }
  return out;
}

std::vector<SnapshotResidual> pde_residual_trajectory(const solver::Trajectory& traj,
                                                      const Grid1D& grid,
                                                      const ModelParams& params,
                                                      waves::TimeConvention convention) {
  std::vector<State> states;
  states.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) states.push_back(s.state);
  return pde_residual_trajectory(states, grid, params, convention);
}

double mass(const State& state, const Grid1D& grid) {
  double acc = 0.0;
  for (double m : state.m) acc += m;
  return acc * grid.dx();
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b, const Grid1D& grid) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidGrid, "field lengths differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc * grid.dx();
}

}  // namespace ffmfg::diagnostics
