#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ffmfg/analysis.hpp"
#include "ffmfg/diagnostics.hpp"
#include "ffmfg/solver.hpp"
#include "ffmfg/waves.hpp"
#include "generators.hpp"

using namespace ffmfg;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams uncoupled(double alpha, double epsilon = 0.0) {
  return {alpha, epsilon, 0.0, Coupling::none, 0.0};
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("Rusanov flux examples") {
    const auto same = solver::rusanov_interface_flux({1.0, 1.0}, {1.0, 1.0}, uncoupled(1.0));
    CHECK(same.flux == Vec2{0.5, -1.0});

    const auto jump = solver::rusanov_interface_flux({1.0, 1.0}, {2.0, 1.0}, uncoupled(1.0));
    const Vec2 fl = analysis::flux_phys(1.0, 1.0, uncoupled(1.0));
    const Vec2 fr = analysis::flux_phys(2.0, 1.0, uncoupled(1.0));
    double s = 0.0;
    for (double v : {1.0, 2.0}) {
      const auto e = analysis::eigenstructure(v, 1.0, 1.0);
      s = std::max({s, std::abs(e.lambda1), std::abs(e.lambda2)});
    }
    CHECK(s == Approx(1.0 + std::sqrt(3.0)));
    CHECK(jump.speed == Approx(s));
    CHECK(jump.flux.x == Approx(0.5 * (fl.x + fr.x) - 0.5 * s));
    CHECK(jump.flux.y == Approx(0.5 * (fl.y + fr.y)));
  }

  TEST_CASE("property: Rusanov flux is consistent") {
    testing::Gen gen(41);
    for (int k = 0; k < 200; ++k) {
      const int which = k % 3;
      ModelParams params{which == 2 ? 1.0 : gen.alpha(), 0.0, 0.0,
                         which == 0   ? Coupling::none
                         : which == 1 ? Coupling::monotone_ff
                                      : Coupling::antimonotone,
                         which == 0 ? 0.0 : gen.uniform(0.1, 3.0)};
      const Vec2 u = {gen.uniform(-3.0, 3.0), gen.log_uniform(0.1, 10.0)};
      CHECK(solver::rusanov_interface_flux(u, u, params).flux == analysis::flux_phys(u.x, u.y, params));
    }
  }

  TEST_CASE("wave speed uses numeric eigenvalues when coupled") {
    const ModelParams coupled{1.0, 0.0, 0.0, Coupling::monotone_ff, 1.0};
    const auto s = solver::max_wave_speed(1.0, 1.0, coupled);
    // DF = [[1, -1.5], [-1, 0]]: eigenvalues (1 +- sqrt(7)) / 2.
    CHECK(s.radius == Approx((1.0 + std::sqrt(7.0)) / 2.0));
    CHECK_FALSE(s.lost_hyperbolicity);
    CHECK(solver::max_wave_speed(0.0, 1.0, uncoupled(1.0)).radius == 0.0);
  }

  TEST_CASE("constant states are stationary for every limiter") {
    const Grid1D grid(32);
    const State flat = waves::constant_state(0.8, 1.0, grid);
    for (auto coupling : {Coupling::none, Coupling::monotone_ff, Coupling::antimonotone}) {
      const ModelParams params{1.0, 0.07, 0.0, coupling, coupling == Coupling::none ? 0.0 : 0.5};
      for (auto limiter : {solver::Limiter::none, solver::Limiter::minmod, solver::Limiter::van_leer}) {
        solver::SolverConfig cfg;
        cfg.limiter = limiter;
        const auto rhs = solver::semidiscrete_rhs(flat, grid, params, cfg);
        for (std::size_t i = 0; i < grid.n_cells(); ++i) {
          CHECK(std::abs(rhs.dv[i]) <= 1e-14);
          CHECK(std::abs(rhs.dm[i]) <= 1e-14);
        }
      }
    }
  }

  TEST_CASE("at v = 0 the density equation is pure diffusion") {
    const double eps = 0.05;
    double previous = 0.0;
    for (std::size_t n : {50, 100, 200}) {
      const Grid1D grid(n);
      std::vector<double> m(n);
      for (std::size_t i = 0; i < n; ++i) m[i] = 1.0 + 0.1 * std::cos(2.0 * kPi * grid.center(i));
      const State s = validate_state(grid, std::vector<double>(n, 0.0), m);
      const auto rhs = solver::semidiscrete_rhs(s, grid, uncoupled(1.0, eps), {});
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(rhs.dv[i] == 0.0);
        const double exact = -eps * 0.1 * 4.0 * kPi * kPi * std::cos(2.0 * kPi * grid.center(i));
        err = std::max(err, std::abs(rhs.dm[i] - exact));
      }
      if (previous > 0.0) CHECK(std::log2(previous / err) == Approx(2.0).epsilon(0.05));
      previous = err;
    }
  }

  TEST_CASE("the semi-discrete operator is first-order accurate on a traveling wave") {
    const ModelParams params{0.5, 0.0, 0.0, Coupling::monotone_ff, 1.5};
    const waves::WaveSpec wave{Coupling::monotone_ff, 1.5, 1};
    const waves::ProfileSpec profile;
    const double c = waves::wave_speed(wave);
    std::vector<double> errors;
    for (std::size_t n : {100, 200, 400}) {
      const Grid1D grid(n);
      const State s = waves::build_traveling_wave(profile, wave, params, grid);
      const auto rhs = solver::semidiscrete_rhs(s, grid, params, {});
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        // m = m0(x + c t): m_t = c m0', v_t = alpha c m^(alpha - 1) m_t.
        const double mt = c * profile.derivative(grid.center(i));
        const double vt = params.alpha * c * std::pow(s.m[i], params.alpha - 1.0) * mt;
        err = std::max({err, std::abs(rhs.dm[i] - mt), std::abs(rhs.dv[i] - vt)});
      }
      errors.push_back(err);
    }
    CHECK(std::log2(errors[0] / errors[1]) >= 0.8);
    CHECK(std::log2(errors[1] / errors[2]) >= 0.8);
  }

  TEST_CASE("time-step examples") {
    solver::SolverConfig cfg;
    const Grid1D grid(100);
    const auto diffusive = solver::cfl_dt(waves::constant_state(0.0, 1.0, grid), grid, uncoupled(1.0, 0.05), cfg);
    CHECK(diffusive.dt == Approx(cfg.cfl * grid.dx() * grid.dx() / (2.0 * 0.05)));
    const auto advective = solver::cfl_dt(waves::constant_state(1.0, 1.0, grid), grid, uncoupled(1.0), cfg);
    CHECK(advective.dt == Approx(cfg.cfl * grid.dx() / ((1.0 + std::sqrt(3.0)) / 2.0)));
    const Grid1D fine(200);
    const auto halved = solver::cfl_dt(waves::constant_state(1.0, 1.0, fine), fine, uncoupled(1.0), cfg);
    CHECK(halved.dt == Approx(advective.dt / 2.0));
    const auto degenerate = solver::cfl_dt(waves::constant_state(0.0, 1.0, grid), grid, uncoupled(1.0), cfg);
    CHECK(degenerate.degenerate_speed);
  }

  TEST_CASE("constant initial data are preserved") {
    const Grid1D grid(40);
    const State flat = waves::constant_state(1.0, 1.0, grid);
    const auto traj = solver::advance(flat, grid, 1.0, uncoupled(1.0, 0.05), {});
    CHECK(traj.reason == solver::Termination::completed);
    CHECK(traj.final_state().t == 1.0);
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      CHECK(std::abs(traj.final_state().v[i] - 1.0) <= 1e-13);
      CHECK(std::abs(traj.final_state().m[i] - 1.0) <= 1e-13);
    }
  }

  TEST_CASE("density below the floor ends the run immediately") {
    const Grid1D grid(16);
    std::vector<double> m(16, 1.0);
    m[5] = 1e-12;
    const State s = validate_state(grid, std::vector<double>(16, 1.0), m);
    const auto traj = solver::advance(s, grid, 1.0, uncoupled(1.0), {});
    CHECK(traj.reason == solver::Termination::blow_up);
    CHECK(traj.steps == 0);
    CHECK_FALSE(traj.detail.empty());
  }

  TEST_CASE("step cap and observer cadence") {
    const Grid1D grid(32);
    const State start = waves::power_law_state({}, 1.0, grid);
    solver::SolverConfig cfg;
    cfg.max_steps = 5;
    std::size_t calls = 0;
    std::size_t last = 0;
    const auto traj = solver::advance(start, grid, 10.0, uncoupled(1.0, 0.01), cfg,
                                      [&](const State&, double, std::size_t step) {
                                        ++calls;
                                        last = step;
                                      });
    CHECK(traj.reason == solver::Termination::step_cap);
    CHECK(traj.steps == 5);
    CHECK(calls == 6);
    CHECK(last == 5);
  }

  TEST_CASE("snapshot storage lands on the final time") {
    const Grid1D grid(32);
    const State start = waves::power_law_state({}, 1.0, grid);
    solver::SolverConfig cfg;
    cfg.store_every = 7;
    const auto traj = solver::advance(start, grid, 0.3, uncoupled(1.0, 0.01), cfg);
    CHECK(traj.snapshots.front().state.t == 0.0);
    CHECK(traj.final_state().t == 0.3);
    CHECK(traj.snapshots.size() == traj.steps / 7 + 1 + (traj.steps % 7 != 0 ? 1 : 0));
  }

  TEST_CASE("property: discrete mass is conserved") {
    testing::Gen gen(42);
    for (int k = 0; k < 12; ++k) {
      const Grid1D grid(static_cast<std::size_t>(gen.integer(16, 96)));
      const int which = k % 3;
      const double alpha = which == 2 ? 1.0 : gen.uniform(0.2, 1.8);
      const ModelParams params{alpha, gen.uniform(0.0, 0.1), 0.0,
                               which == 0   ? Coupling::none
                               : which == 1 ? Coupling::monotone_ff
                                            : Coupling::antimonotone,
                               which == 0 ? 0.0 : gen.uniform(0.1, 1.0)};
      waves::ProfileSpec profile;
      profile.amplitude = gen.uniform(0.0, 0.4);
      profile.mode = gen.integer(1, 3);
      profile.phase = gen.uniform(0.0, 6.0);
      solver::SolverConfig cfg;
      cfg.limiter = static_cast<solver::Limiter>(gen.integer(0, 2));
      const State start = waves::power_law_state(profile, alpha, grid);
      double drift = 0.0;
      const auto traj = solver::advance(start, grid, 0.2, params, cfg,
                                        [&](const State& s, double, std::size_t) {
                                          drift = std::max(drift, std::abs(diagnostics::mass(s, grid) - 1.0));
                                        });
      CHECK(drift <= 1e-12);
      if (traj.reason == solver::Termination::completed) {
        for (double m : traj.final_state().m) CHECK(m > 0.0);
      }
    }
  }

  TEST_CASE("limiter names round-trip") {
    for (auto l : {solver::Limiter::none, solver::Limiter::minmod, solver::Limiter::van_leer}) {
      CHECK(solver::limiter_from_string(solver::to_string(l)) == l);
    }
    CHECK_THROWS(solver::limiter_from_string("superbee"));
  }

  TEST_CASE("solver configuration is validated") {
    solver::SolverConfig cfg;
    cfg.cfl = 0.0;
    CHECK_THROWS_AS(solver::validate_config(cfg), Error);
    cfg.cfl = 1.5;
    CHECK_THROWS_AS(solver::validate_config(cfg), Error);
    cfg.cfl = 1.0;
    CHECK_NOTHROW(solver::validate_config(cfg));
  }
}
