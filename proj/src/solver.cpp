#include "ffmfg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ffmfg/analysis.hpp"
#include "ffmfg/oracle.hpp"

namespace ffmfg::solver {

std::string_view to_string(Limiter limiter) {
  switch (limiter) {
    case Limiter::none: return "none";
    case Limiter::minmod: return "minmod";
    case Limiter::van_leer: return "van_leer";
  }
  return "none";
}

Limiter limiter_from_string(std::string_view name) {
  if (name == "none") return Limiter::none;
  if (name == "minmod") return Limiter::minmod;
  if (name == "van_leer") return Limiter::van_leer;
  throw Error(ErrorCode::InvalidConfig,
              "unknown limiter '" + std::string(name) + "' (expected none|minmod|van_leer)");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::completed: return "completed";
    case Termination::blow_up: return "blow_up";
    case Termination::step_cap: return "step_cap";
  }
  return "completed";
}

SolverConfig validate_config(const SolverConfig& raw) {
  if (!(raw.cfl > 0.0 && raw.cfl <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "cfl must lie in (0, 1]");
  }
  if (!(raw.m_floor > 0.0)) throw Error(ErrorCode::InvalidConfig, "m_floor must be positive");
  if (raw.max_steps == 0) throw Error(ErrorCode::InvalidConfig, "max_steps must be positive");
  return raw;
}

WaveSpeed max_wave_speed(double v, double m, const ModelParams& params) {
  if (params.coupling == Coupling::none) {
    const auto eig = analysis::eigenstructure(v, m, params.alpha);
    return {std::max(std::abs(eig.lambda1), std::abs(eig.lambda2)), false};
  }
  const Matrix2 jac = analysis::flux_jacobian(v, m, params);
  const auto eig = oracle::eig2_numeric(jac);
  return {oracle::spectral_radius(eig, jac), eig.complex};
}

InterfaceFlux rusanov_interface_flux(Vec2 left, Vec2 right, const ModelParams& params) {
  const Vec2 f_left = analysis::flux_phys(left.x, left.y, params);
  const Vec2 f_right = analysis::flux_phys(right.x, right.y, params);
  const WaveSpeed s_left = max_wave_speed(left.x, left.y, params);
  const WaveSpeed s_right = max_wave_speed(right.x, right.y, params);
  InterfaceFlux out;
  out.speed = std::max(s_left.radius, s_right.radius);
  out.lost_hyperbolicity = s_left.lost_hyperbolicity || s_right.lost_hyperbolicity;
  out.flux = 0.5 * (f_left + f_right) - 0.5 * out.speed * (right - left);
  return out;
}

namespace {

double limited_slope(Limiter limiter, double backward, double forward) {
  switch (limiter) {
    case Limiter::none: return 0.0;
    case Limiter::minmod:
      if (backward * forward <= 0.0) return 0.0;
      return std::copysign(std::min(std::abs(backward), std::abs(forward)), backward);
    case Limiter::van_leer:
      if (backward * forward <= 0.0) return 0.0;
      return 2.0 * backward * forward / (backward + forward);
  }
  return 0.0;
}

// Half-slopes of each cell, so that U_i +/- slope_i are the interface traces.
std::vector<double> half_slopes(const std::vector<double>& u, const Grid1D& grid, Limiter limiter) {
  std::vector<double> out(u.size(), 0.0);
  if (limiter == Limiter::none) return out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double back = u[i] - u[grid.neighbor(i, -1)];
    const double fwd = u[grid.neighbor(i, 1)] - u[i];
    out[i] = 0.5 * limited_slope(limiter, back, fwd);
  }
  return out;
}

}  // namespace

Rhs semidiscrete_rhs(const State& state, const Grid1D& grid, const ModelParams& params,
                     const SolverConfig& config) {
  const std::size_t n = grid.n_cells();
  const double dx = grid.dx();
  const auto sv = half_slopes(state.v, grid, config.limiter);
  const auto sm = half_slopes(state.m, grid, config.limiter);

  // flux[i] sits on the interface i + 1/2.
  std::vector<Vec2> flux(n);
  Rhs rhs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = grid.neighbor(i, 1);
    const Vec2 left{state.v[i] + sv[i], state.m[i] + sm[i]};
    const Vec2 right{state.v[j] - sv[j], state.m[j] - sm[j]};
    const auto f = rusanov_interface_flux(left, right, params);
    flux[i] = f.flux;
    rhs.lost_hyperbolicity = rhs.lost_hyperbolicity || f.lost_hyperbolicity;
  }

  rhs.dv.resize(n);
  rhs.dm.resize(n);
  const double diffusion = params.epsilon / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = grid.neighbor(i, -1);
    const std::size_t r = grid.neighbor(i, 1);
    rhs.dv[i] = -(flux[i].x - flux[l].x) / dx +
                diffusion * (state.v[r] - 2.0 * state.v[i] + state.v[l]);
    rhs.dm[i] = -(flux[i].y - flux[l].y) / dx +
                diffusion * (state.m[r] - 2.0 * state.m[i] + state.m[l]);
  }
  return rhs;
}

TimeStep cfl_dt(const State& state, const Grid1D& grid, const ModelParams& params,
                const SolverConfig& config) {
  double s_max = 0.0;
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    s_max = std::max(s_max, max_wave_speed(state.v[i], state.m[i], params).radius);
  }
  const double dx = grid.dx();
  double bound = std::numeric_limits<double>::infinity();
  if (s_max > 0.0) bound = dx / s_max;
  if (params.epsilon > 0.0) bound = std::min(bound, dx * dx / (2.0 * params.epsilon));
  if (!std::isfinite(bound)) return {config.cfl * dx, true};
  return {config.cfl * bound, false};
}

namespace {

// Empty string when the state is admissible, otherwise a description.
std::string blow_up_reason(const State& s, double m_floor) {
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    if (!std::isfinite(s.v[i]) || !std::isfinite(s.m[i])) {
      return "non-finite value at cell " + std::to_string(i) + ", t = " + std::to_string(s.t);
    }
    if (s.m[i] < m_floor) {
      return "density below floor at cell " + std::to_string(i) + ", t = " + std::to_string(s.t);
    }
  }
  return {};
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

Trajectory advance(const State& initial, const Grid1D& grid, double t_final,
                   const ModelParams& params, const SolverConfig& config,
                   const Observer& observer) {
  if (!(t_final > initial.t)) {
    throw Error(ErrorCode::DomainError, "t_final must exceed the initial time");
  }
  const SolverConfig cfg = validate_config(config);

  Trajectory traj;
  if (auto why = blow_up_reason(initial, cfg.m_floor); !why.empty()) {
    traj.reason = Termination::blow_up;
    traj.detail = why;
    try {
      traj.snapshots.push_back({validate_state(grid, initial), 0.0});
    } catch (const Error&) {
    }
    return traj;
  }
  State current = validate_state(grid, initial);
  traj.snapshots.push_back({current, 0.0});
  if (observer) observer(current, 0.0, 0);

  const double t_tol = 1e-14 * std::max(1.0, std::abs(t_final));
  double last_dt = 0.0;
  try {
    while (current.t < t_final - t_tol) {
      if (traj.steps >= cfg.max_steps) {
        traj.reason = Termination::step_cap;
        break;
      }
      const auto step = cfl_dt(current, grid, params, cfg);
      traj.degenerate_speed = traj.degenerate_speed || step.degenerate_speed;
      double dt = step.dt;
      const bool last = current.t + dt >= t_final - t_tol;
      if (last) dt = t_final - current.t;

      // Stage 1: forward Euler.
      const Rhs k1 = semidiscrete_rhs(current, grid, params, cfg);
      State stage = current;
      axpy(stage.v, dt, k1.dv);
      axpy(stage.m, dt, k1.dm);
      stage.t = current.t + dt;
      if (auto why = blow_up_reason(stage, cfg.m_floor); !why.empty()) {
        traj.reason = Termination::blow_up;
        traj.detail = why;
        break;
      }
      // Stage 2: average of the start and a second Euler step.
      const Rhs k2 = semidiscrete_rhs(stage, grid, params, cfg);
      State next = current;
      for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        next.v[i] = 0.5 * current.v[i] + 0.5 * (stage.v[i] + dt * k2.dv[i]);
        next.m[i] = 0.5 * current.m[i] + 0.5 * (stage.m[i] + dt * k2.dm[i]);
      }
      next.t = last ? t_final : current.t + dt;
      traj.lost_hyperbolicity = traj.lost_hyperbolicity || k1.lost_hyperbolicity ||
                                k2.lost_hyperbolicity;
      if (auto why = blow_up_reason(next, cfg.m_floor); !why.empty()) {
        traj.reason = Termination::blow_up;
        traj.detail = why;
        break;
      }

      current = std::move(next);
      last_dt = dt;
      ++traj.steps;
      if (observer) observer(current, dt, traj.steps);
      const bool keep = cfg.store_every > 0 && traj.steps % cfg.store_every == 0;
      if (keep || current.t >= t_final - t_tol) traj.snapshots.push_back({current, dt});
    }
  } catch (const Error& e) {
    traj.reason = Termination::blow_up;
    traj.detail = e.what();
  }
  if (traj.reason != Termination::completed && traj.snapshots.back().state.t != current.t) {
    traj.snapshots.push_back({current, last_dt});
  }
  return traj;
}

}  // namespace ffmfg::solver
