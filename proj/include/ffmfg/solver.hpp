#pragma once

// Finite-volume semi-discretization of the (viscous, optionally coupled)
// system on the periodic grid, integrated with two-stage SSP Runge-Kutta.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ffmfg/core.hpp"

namespace ffmfg::solver {

/// Slope limiter for the interface reconstruction; `none` is the first-order scheme.
enum class Limiter { none, minmod, van_leer };

std::string_view to_string(Limiter limiter);
Limiter limiter_from_string(std::string_view name);

struct SolverConfig {
  double cfl = 0.4;
  Limiter limiter = Limiter::none;
  double m_floor = kDefaultDensityFloor;
  std::size_t max_steps = 50'000'000;
  /// Keep every k-th accepted state in the trajectory (0 keeps only the ends).
  std::size_t store_every = 0;
};

SolverConfig validate_config(const SolverConfig& raw);

struct WaveSpeed {
  double radius = 0.0;
  bool lost_hyperbolicity = false;
};

/// Spectral-radius estimate of the flux Jacobian at (v, m).
WaveSpeed max_wave_speed(double v, double m, const ModelParams& params);

struct InterfaceFlux {
  Vec2 flux;
  double speed = 0.0;
  bool lost_hyperbolicity = false;
};

/// Local Lax-Friedrichs flux between states (v, m)_L and (v, m)_R.
InterfaceFlux rusanov_interface_flux(Vec2 left, Vec2 right, const ModelParams& params);

struct Rhs {
  std::vector<double> dv;
  std::vector<double> dm;
  bool lost_hyperbolicity = false;
};

Rhs semidiscrete_rhs(const State& state, const Grid1D& grid, const ModelParams& params,
                     const SolverConfig& config);

struct TimeStep {
  double dt = 0.0;
  bool degenerate_speed = false;  // s_max = 0 and epsilon = 0; dt fell back to cfl * dx
};

TimeStep cfl_dt(const State& state, const Grid1D& grid, const ModelParams& params,
                const SolverConfig& config);

enum class Termination { completed, blow_up, step_cap };

std::string_view to_string(Termination reason);

struct Snapshot {
  State state;
  double dt = 0.0;  // step that produced this state; 0 for the initial state
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  Termination reason = Termination::completed;
  std::size_t steps = 0;
  bool lost_hyperbolicity = false;
  bool degenerate_speed = false;
  std::string detail;

  const State& final_state() const { return snapshots.back().state; }
};

/// Called with the initial state (step 0, dt 0) and after every accepted step.
using Observer = std::function<void(const State& state, double dt, std::size_t step)>;

/// Integrates to t_final, landing on it exactly. Never throws on blow-up: a
/// density below m_floor or a non-finite value ends the run as blow_up.
Trajectory advance(const State& initial, const Grid1D& grid, double t_final,
                   const ModelParams& params, const SolverConfig& config,
                   const Observer& observer = {});

}  // namespace ffmfg::solver
