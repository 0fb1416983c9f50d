// Acceptance criteria: one PASS/FAIL line per criterion, exit code 0 iff all pass.
// Lines tagged "info" report alternative readings and are not criteria.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ffmfg/analysis.hpp"
#include "ffmfg/diagnostics.hpp"
#include "ffmfg/oracle.hpp"
#include "ffmfg/runner.hpp"
#include "ffmfg/solver.hpp"
#include "ffmfg/waves.hpp"

using namespace ffmfg;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;
double g_worst_mass_error = 0.0;

void report(int id, bool ok, const std::string& what, const std::string& measured) {
  if (!ok) ++g_failures;
  std::printf("[%s] #%d %s :: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), measured.c_str());
  std::fflush(stdout);
}

void info(int id, const std::string& text) {
  std::printf("[info] #%d %s\n", id, text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double theta_reference(double alpha) {
  return 0.5 * (std::sqrt(4.0 - 2.0 * alpha + alpha * alpha) + alpha - 2.0);
}

void track_mass(const State& s, const Grid1D& grid) {
  g_worst_mass_error = std::max(g_worst_mass_error, std::abs(diagnostics::mass(s, grid) - 1.0));
}

// ---------------------------------------------------------------------------

// An entropy exists iff D^2 eta * DF is symmetric. Both factors are written out
// here from scratch so the check does not share code with the library.
void criterion_entropy() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double a = uniform(rng, 1.1, 20.0);
    const double b = analysis::entropy_exponent_b(alpha, a);
    for (int j = 0; j < 10; ++j) {
      const double v = uniform(rng, 0.1, 10.0);
      const double m = uniform(rng, 0.1, 10.0);
      const double eta = std::pow(v, a) * std::pow(m, b);
      const double h00 = a * (a - 1.0) * eta / (v * v);
      const double h01 = a * b * eta / (v * m);
      const double h11 = b * (b - 1.0) * eta / (m * m);
      const double j00 = v * std::pow(m, -alpha);
      const double j01 = -0.5 * alpha * v * v * std::pow(m, -1.0 - alpha);
      const double j10 = -std::pow(m, 1.0 - alpha);
      const double j11 = -(1.0 - alpha) * v * std::pow(m, -alpha);
      const double upper = h00 * j01 + h01 * j11;
      const double lower = h01 * j00 + h11 * j10;
      const double size = std::abs(h00 * j01) + std::abs(h01 * j11) + std::abs(h01 * j00) +
                          std::abs(h11 * j10);
      worst = std::max(worst, std::abs(upper - lower) / size);
    }
  }
  double worst_theta = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double alpha = 0.05 + 1.9 * (k + 0.5) / 20.0;
    const double limit = -analysis::entropy_exponent_b(alpha, 1e6) / 1e6;
    worst_theta = std::max(worst_theta, std::abs(limit - theta_reference(alpha)));
  }
  report(1, worst <= 1e-9 && worst_theta <= 1e-5, "entropy family",
         fmt("max relative residual %.3e (tol 1e-9) over 2000 points; max |-b/a - theta| %.3e "
             "(tol 1e-5) over 20 alpha",
             worst, worst_theta));
}

void criterion_eigen() {
  std::mt19937_64 rng(202);
  ModelParams params;
  double worst = 0.0;
  double worst_transpose = 0.0;
  double worst_match = 0.0;
  bool signs = true;
  for (int k = 0; k < 100; ++k) {
    params.alpha = uniform(rng, 0.05, 1.95);
    const double v = uniform(rng, 0.1, 10.0);
    const double m = uniform(rng, 0.1, 10.0);
    const Matrix2 jac = analysis::flux_jacobian(v, m, params);
    const auto e = analysis::eigenstructure(v, m, params.alpha);
    for (const auto& [lambda, r] : {std::pair{e.lambda1, e.r1}, std::pair{e.lambda2, e.r2}}) {
      const double scale = norm(r) * std::max(std::abs(lambda), 1.0);
      worst = std::max(worst, norm(jac * r - lambda * r) / scale);
      worst_transpose = std::max(worst_transpose, norm(jac.transpose() * r - lambda * r) / scale);
    }
    const auto num = oracle::eig2_numeric(jac);
    const double size = std::max(std::abs(e.lambda1), std::abs(e.lambda2));
    const auto cross = [](Vec2 x, Vec2 y) { return (x.x * y.y - x.y * y.x) / (norm(x) * norm(y)); };
    worst_match = std::max({worst_match, std::abs(num.lambda1 - e.lambda1) / size,
                            std::abs(num.lambda2 - e.lambda2) / size, std::abs(cross(num.r1, e.r1)),
                            std::abs(cross(num.r2, e.r2))});
    const auto g = analysis::genuine_nonlinearity(v, m, params.alpha);
    signs = signs && g.g1 < 0.0 && g.g2 > 0.0;
    const auto flat = analysis::genuine_nonlinearity(0.0, m, params.alpha);
    signs = signs && flat.g1 == 0.0 && flat.g2 == 0.0;
  }
  report(2, worst <= 1e-10 && worst_match <= 1e-10 && signs, "eigenstructure",
         fmt("max |DF r - lambda r| relative %.3e (tol 1e-10); max gap to numeric eigensolver "
             "%.3e (tol 1e-10); sign pattern g1 < 0 < g2 with zeros at v = 0: %s",
             worst, worst_match, signs ? "holds" : "violated"));
  info(2, fmt("transposed reading |DF^T r - lambda r| relative reaches %.3e: the closed-form "
              "vectors are right eigenvectors of DF",
              worst_transpose));
}

void criterion_riemann() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  double literal = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double s = uniform(rng, -3.0, -0.1);
    const double r = uniform(rng, 1.5, 1.01) * analysis::s1_threshold(alpha);
    const auto spec = analysis::make_riemann_spec(alpha, s, r);
    const double v = uniform(rng, 0.1, 10.0);
    const double m = uniform(rng, 0.1, 10.0);
    const auto e = analysis::eigenstructure(v, m, alpha);
    const auto z = analysis::riemann_z(spec, v, m);
    const auto w = analysis::riemann_w(spec, v, m);
    const auto rel = [](Vec2 grad, Vec2 r) { return std::abs(dot(grad, r)) / (norm(grad) * norm(r)); };
    worst = std::max({worst, rel(z.gradient, e.r2), rel(w.gradient, e.r1)});
    literal = std::max({literal, rel(z.gradient, e.r1), rel(w.gradient, e.r2)});
  }
  bool convex_ok = true;
  bool witness_ok = true;
  for (int k = 0; k < 20; ++k) {
    const double alpha = 0.05 + 1.9 * (k + 0.5) / 20.0;
    const double threshold = analysis::s1_threshold(alpha);
    convex_ok = convex_ok &&
                analysis::convexity_scan(analysis::ConvexKind::z, -1.0, alpha, 1000).passed &&
                analysis::convexity_scan(analysis::ConvexKind::w, 1.1 * threshold, alpha, 1000).passed;
    const auto outside = analysis::convexity_scan(analysis::ConvexKind::w, 0.9 * threshold, alpha, 1000);
    witness_ok = witness_ok && !outside.passed && outside.witness.has_value();
  }
  report(3, worst <= 1e-10 && convex_ok && witness_ok, "Riemann invariants",
         fmt("max |grad z . r2|, |grad w . r1| relative %.3e (tol 1e-10); PSD for s = -1 and "
             "r = 1.1 x threshold at 20 alpha: %s; witness for r = 0.9 x threshold at 20 alpha: %s",
             worst, convex_ok ? "yes" : "no", witness_ok ? "yes" : "no"));
  info(3, fmt("pairing z with r1 and w with r2 leaves relative products up to %.3e: z annihilates the fast family r2 and w the slow family r1",
              literal));
}

void criterion_density_bound() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double M = uniform(rng, 0.5, 5.0);
    const double s = uniform(rng, -3.0, -0.1);
    const double r = uniform(rng, 1.01, 1.5) * analysis::s1_threshold(alpha);
    const auto spec = analysis::make_riemann_spec(alpha, s, r);
    const double closed = analysis::density_lower_bound(M, spec);
    const Vec2 corner = oracle::level_set_solve(M, spec);
    worst = std::max(worst, std::abs(std::log(closed) - std::log(corner.y)));
  }
  report(4, worst <= 1e-12, "density lower bound",
         fmt("max |log m_closed - log m_level_set| %.3e (tol 1e-12) over 100 draws", worst));
}

void wave_criterion(int id, const std::string& name, const config::RunConfig& cfg) {
  const auto start = Clock::now();
  const auto study = runner::wave_convergence(cfg, {200, 400, 800});
  const double elapsed = seconds_since(start);
  bool completed = true;
  for (const auto& level : study.levels) {
    completed = completed && level.reason == solver::Termination::completed;
    g_worst_mass_error = std::max(g_worst_mass_error, level.mass_drift);
  }
  const Grid1D grid(400);
  const State initial = runner::initial_state(cfg, grid);
  track_mass(initial, grid);
  const double error = study.levels[1].l1_error;
  const double order = std::log2(study.levels[0].l1_error / study.levels[2].l1_error) / 2.0;
  const double min_order = std::min(study.orders[0], study.orders[1]);
  bool ok = completed && error <= 0.02 && order >= 0.8 && min_order >= 0.8 && elapsed <= 10.0;
  std::string measured =
      fmt("L1(m) at N=400 %.4e (tol 0.02); errors %.4e / %.4e / %.4e, orders %.3f %.3f, "
          "overall %.3f (min 0.8); %.2f s (max 10)",
          error, study.levels[0].l1_error, study.levels[1].l1_error, study.levels[2].l1_error,
          study.orders[0], study.orders[1], order, elapsed);
  if (cfg.params.coupling == Coupling::antimonotone) {
    const double c = waves::wave_speed({cfg.params.coupling, cfg.params.K, cfg.initial.sign});
    const auto printed = waves::analytic_wave_residual(cfg.initial.profile, c, cfg.params,
                                                       grid, cfg.t_final,
                                                       waves::TimeConvention::printed);
    const bool falsified = printed.v_equation >= 1e-2 * printed.scale;
    ok = ok && falsified;
    measured += fmt("; +v_t residual %.3e vs 1e-2 x scale %.3e", printed.v_equation,
                    1e-2 * printed.scale);
  }
  report(id, ok, name, measured);
}

config::RunConfig antimonotone_config() {
  config::RunConfig cfg = runner::default_wave_config();
  cfg.params.alpha = 1.0;
  cfg.params.coupling = Coupling::antimonotone;
  cfg.params.K = 0.5;
  config::validate_run_config(cfg);
  return cfg;
}

struct RegionRun {
  solver::Trajectory traj;
  diagnostics::MonitorSeries series;
  double seconds = 0.0;
};

RegionRun region_run(double t_final, solver::Limiter limiter) {
  const Grid1D grid(200);
  ModelParams params{1.0, 0.05, 0.0, Coupling::none, 0.0};
  const State start = waves::power_law_state(waves::ProfileSpec{}, params.alpha, grid);
  auto spec = diagnostics::make_monitor_spec(params.alpha, 2.0, -1.0, -2.0);
  spec.require_region = true;
  diagnostics::MonitorRecorder recorder(grid, params, spec);
  auto record = recorder.observer();
  solver::SolverConfig cfg;
  cfg.limiter = limiter;
  const auto start_time = Clock::now();
  RegionRun run;
  run.traj = solver::advance(start, grid, t_final, params, cfg,
                             [&](const State& s, double dt, std::size_t step) {
                               record(s, dt, step);
                               track_mass(s, grid);
                             });
  run.seconds = seconds_since(start_time);
  run.series = recorder.take();
  return run;
}

double invariant_level(const diagnostics::MonitorSeries& series) {
  const auto& first = series.rows.front();
  return 1.05 * std::max(first.max_z, first.max_w);
}

std::string region_summary(const RegionRun& run) {
  const double M = invariant_level(run.series);
  const auto mp = diagnostics::maximum_principle_check(run.series, M, 0.01);
  return fmt("M = %.4f, max invariant %.4f (cap %.4f), min m %.4f vs 0.9 x bound %.4f", M,
             mp.max_invariant, 1.01 * M, mp.min_m, 0.9 * mp.density_bound);
}

void criterion_region(const RegionRun& run) {
  const double M = invariant_level(run.series);
  const auto mp = diagnostics::maximum_principle_check(run.series, M, 0.01);
  double max_inv = -1.0;
  double min_m = 1e300;
  for (const auto& row : run.series.rows) {
    max_inv = std::max({max_inv, row.max_z, row.max_w});
    min_m = std::min(min_m, row.min_m);
  }
  const double bound = analysis::density_lower_bound(M, run.series.spec.riemann);
  const bool ok = run.traj.reason == solver::Termination::completed && max_inv <= 1.01 * M &&
                  min_m >= 0.9 * bound && mp.passed;
  report(7, ok, "invariant region",
         fmt("alpha 1, s -1, r -2, eps 0.05, N 200, t 5, van Leer slopes: %s; %zu steps",
             region_summary(run).c_str(), run.traj.steps));
}

void criterion_dissipation(const RegionRun& run, int id, const std::string& label, bool primary) {
  const auto rep = diagnostics::entropy_dissipation_check(run.series, 0.05, 1e-12, 1e-8);
  const bool ok = rep.agreement_fraction >= 0.9 && rep.monotonicity_checked && rep.monotone;
  const std::string measured =
      fmt("%s: %zu/%zu interior rows within 5%% (%.1f%%, need 90%%); largest step increase of "
          "the entropy %.3e (tol 1e-8)",
          label.c_str(), rep.rows_agreeing, rep.rows_checked, 100.0 * rep.agreement_fraction,
          rep.max_increase);
  if (primary) {
    report(id, ok, "entropy dissipation", measured);
  } else {
    info(id, measured + (ok ? " -> would pass" : " -> would fail"));
  }
}

void criterion_conservation() {
  const auto run = region_run(10.0, solver::Limiter::van_leer);
  const auto& first = run.series.rows.front();
  double lp = 0.0;
  double lq = 0.0;
  for (const auto& row : run.series.rows) {
    lp = std::max(lp, row.lp_m);
    lq = std::max(lq, row.lq_v);
  }
  const bool completed = run.traj.reason == solver::Termination::completed;
  const bool ok = g_worst_mass_error <= 1e-12 && completed && lp < 10.0 * first.lp_m &&
                  lq < 10.0 * first.lq_v;
  report(9, ok, "conservation and no blow-up",
         fmt("max |mass - 1| %.3e over every run (tol 1e-12); t = 10 run %s after %zu steps; "
             "max L4(m) %.4f vs 10 x %.4f; max L4(v) %.4f vs 10 x %.4f",
             g_worst_mass_error, std::string(solver::to_string(run.traj.reason)).c_str(),
             run.traj.steps, lp, first.lp_m, lq, first.lq_v));
}

void criterion_potential_residual() {
  const ModelParams params{1.0, 0.0, 0.0, Coupling::monotone_ff, 1.5};
  const waves::WaveSpec wave{Coupling::monotone_ff, 1.5, 1};
  const waves::ProfileSpec profile;
  std::vector<double> residuals;
  std::vector<std::size_t> cells{50, 100, 200};
  for (std::size_t n : cells) {
    const Grid1D grid(n);
    const double dt = 0.5 * grid.dx();
    std::vector<State> snapshots;
    for (int k = 0; k < 5; ++k) {
      snapshots.push_back(waves::exact_traveling_wave_at(profile, wave, params, grid, 0.3 + k * dt));
    }
    double worst = 0.0;
    for (const auto& r : diagnostics::pde_residual_trajectory(snapshots, grid, params)) {
      worst = std::max({worst, r.v_equation, r.m_equation});
    }
    residuals.push_back(worst);
  }
  const double o1 = std::log2(residuals[0] / residuals[1]);
  const double o2 = std::log2(residuals[1] / residuals[2]);
  report(10, std::min(o1, o2) >= 1.8, "potential-form residual",
         fmt("max residual %.4e / %.4e / %.4e at N = 50/100/200 with dt = dx/2; orders %.3f "
             "%.3f (min 1.8)",
             residuals[0], residuals[1], residuals[2], o1, o2));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  criterion_entropy();
  criterion_eigen();
  criterion_riemann();
  criterion_density_bound();
  wave_criterion(5, "monotone traveling wave", runner::default_wave_config());
  wave_criterion(6, "antimonotone traveling wave", antimonotone_config());

  const auto region = region_run(5.0, solver::Limiter::van_leer);
  criterion_region(region);
  const auto first_order = region_run(5.0, solver::Limiter::none);
  info(7, "first-order reconstruction: " + region_summary(first_order));
  criterion_dissipation(region, 8, "van Leer slopes", true);
  criterion_dissipation(first_order, 8, "first-order reconstruction", false);
  criterion_conservation();
  criterion_potential_residual();

  std::printf("%d of 10 criteria failed; %.1f s\n", g_failures, seconds_since(start));
  return g_failures == 0 ? 0 : 1;
}
