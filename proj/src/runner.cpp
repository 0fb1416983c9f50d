#include "ffmfg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "ffmfg/analysis.hpp"
#include "ffmfg/io.hpp"
#include "ffmfg/waves.hpp"

namespace ffmfg::runner {
namespace fs = std::filesystem;

namespace {

waves::WaveSpec wave_spec(const config::RunConfig& cfg) {
  return {cfg.params.coupling, cfg.params.K, cfg.initial.sign};
}

std::string step_name(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", step);
  return buf;
}

std::string sig9(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.9g", x);
  return buf;
}

}  // namespace

State initial_state(const config::RunConfig& cfg, const Grid1D& grid) {
  const auto& init = cfg.initial;
  switch (init.kind) {
    case config::InitialKind::traveling_wave:
      return waves::build_traveling_wave(init.profile, wave_spec(cfg), cfg.params, grid);
    case config::InitialKind::fourier:
      return waves::power_law_state(init.profile, cfg.params.alpha, grid);
    case config::InitialKind::constant:
      return waves::constant_state(init.v_bar, init.profile.mean, grid);
    case config::InitialKind::from_value_function: {
      const double k = 2.0 * std::numbers::pi * init.profile.mode;
      std::vector<double> u0(grid.n_cells());
      for (std::size_t i = 0; i < u0.size(); ++i) {
        u0[i] = init.profile.amplitude * std::sin(k * grid.center(i) + init.profile.phase) / k;
      }
      return validate_state(grid, waves::v_from_value_function(u0, cfg.params.p, grid),
                            std::vector<double>(grid.n_cells(), init.profile.mean));
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown initial kind");
}

diagnostics::MonitorSpec monitor_spec(const config::RunConfig& cfg) {
  const auto& mon = cfg.monitors;
  return diagnostics::make_monitor_spec(cfg.params.alpha, mon.entropy_a, mon.riemann_s,
                                        mon.riemann_r, mon.lp, mon.lq);
}

RunResult execute(const config::RunConfig& cfg, const std::optional<fs::path>& out_dir) {
  const Grid1D grid(cfg.n_cells);
  const State start = initial_state(cfg, grid);
  const auto spec = monitor_spec(cfg);
  if (cfg.monitors.requested) {
    const double min_v = *std::min_element(start.v.begin(), start.v.end());
    if (!(min_v > 0.0)) {
      throw Error(ErrorCode::DomainError,
                  "monitors were requested but the initial data leave v > 0, m > 0");
    }
  }

  if (out_dir) {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec) throw io::IoError("cannot create '" + out_dir->string() + "': " + ec.message());
  }

  diagnostics::MonitorRecorder recorder(grid, cfg.params, spec, cfg.monitors.every);
  auto record = recorder.observer();
  std::size_t last_written = static_cast<std::size_t>(-1);
  const auto observer = [&](const State& s, double dt, std::size_t step) {
    record(s, dt, step);
    if (out_dir && step % cfg.output.snapshot_every == 0) {
      io::write_text_file(*out_dir / step_name(step), io::snapshot_csv(s, grid));
      last_written = step;
    }
  };

  const auto traj = solver::advance(start, grid, cfg.t_final, cfg.params, cfg.solver, observer);

  RunResult result;
  result.reason = traj.reason;
  result.steps = traj.steps;
  result.detail = traj.detail;
  result.final_state = traj.snapshots.empty() ? start : traj.final_state();
  const auto& series = recorder.series();
  if (!series.rows.empty()) {
    result.first_row = series.rows.front();
    result.last_row = series.rows.back();
  }
  if (series.rows.empty() || result.last_row.t != result.final_state.t) {
    result.last_row = diagnostics::monitor_row(result.final_state, grid, cfg.params, spec);
    if (series.rows.empty()) result.first_row = result.last_row;
  }
  result.invariants_available = std::isfinite(result.first_row.max_z);

  if (out_dir) {
    if (last_written != traj.steps) {
      io::write_text_file(*out_dir / step_name(traj.steps),
                          io::snapshot_csv(result.final_state, grid));
    }
    std::string csv = io::kMonitorHeader;
    csv += '\n';
    for (const auto& row : series.rows) csv += io::monitor_csv_line(row);
    io::write_text_file(*out_dir / "monitors.csv", csv);
  }

  if (cfg.initial.kind == config::InitialKind::traveling_wave) {
    const State exact = waves::exact_traveling_wave_at(cfg.initial.profile, wave_spec(cfg),
                                                       cfg.params, grid, result.final_state.t);
    result.wave_error = diagnostics::l1_distance(result.final_state.m, exact.m, grid);
  }
  if (cfg.params.epsilon > 0.0 && result.invariants_available && !series.rows.empty()) {
    const double M =
        cfg.monitors.invariant_margin * std::max(result.first_row.max_z, result.first_row.max_w);
    result.max_principle = diagnostics::maximum_principle_check(series, M, 1e-2);
  }
  return result;
}

namespace {

int exit_for(solver::Termination reason) {
  return reason == solver::Termination::completed ? kSuccess : kBlowUp;
}

}  // namespace

int run_simulate(const config::RunConfig& cfg, const fs::path& out_dir, bool quiet,
                 std::ostream& out, std::ostream& err) {
  RunResult r;
  try {
    r = execute(cfg, out_dir);
  } catch (const io::IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  if (!quiet) {
    out << "termination = " << solver::to_string(r.reason) << '\n';
    out << "steps = " << r.steps << '\n';
    out << "t = " << sig9(r.final_state.t) << '\n';
    out << "mass = " << sig9(r.last_row.mass) << '\n';
    if (!r.detail.empty()) out << "detail = " << r.detail << '\n';
    if (r.max_principle) {
      out << "max_principle = " << (r.max_principle->passed ? "pass" : "fail")
          << " (M = " << sig9(r.max_principle->M)
          << ", max invariant = " << sig9(r.max_principle->max_invariant)
          << ", min m = " << sig9(r.max_principle->min_m)
          << ", bound = " << sig9(r.max_principle->density_bound) << ")\n";
    }
  }
  if (r.wave_error) out << "l1_error_m = " << sig9(*r.wave_error) << '\n';
  return exit_for(r.reason);
}

std::vector<config::RunConfig> expand_sweep(const config::Document& doc) {
  const auto& sw = doc.sweep;
  const auto or_base = [](const std::vector<double>& list, double base) {
    return list.empty() ? std::vector<double>{base} : list;
  };
  const auto alphas = or_base(sw.alpha, doc.run.params.alpha);
  const auto epsilons = or_base(sw.epsilon, doc.run.params.epsilon);
  const auto ks = or_base(sw.K, doc.run.params.K);
  const auto cells = sw.n_cells.empty() ? std::vector<std::size_t>{doc.run.n_cells} : sw.n_cells;

  std::vector<config::RunConfig> runs;
  for (double alpha : alphas) {
    for (double epsilon : epsilons) {
      for (double K : ks) {
        for (std::size_t n : cells) {
          config::RunConfig cfg = doc.run;
          cfg.params.alpha = alpha;
          cfg.params.epsilon = epsilon;
          cfg.params.K = K;
          cfg.n_cells = n;
          config::validate_run_config(cfg);
          runs.push_back(std::move(cfg));
        }
      }
    }
  }
  return runs;
}

int run_sweep(const config::Document& doc, const fs::path& out_dir, bool quiet, std::ostream& out,
              std::ostream& err) {
  if (!doc.sweep.any_list || doc.sweep.any_empty) {
    err << "error: sweep needs at least one non-empty list among sweep.alpha, sweep.epsilon, "
           "sweep.K, sweep.n_cells\n";
    return kConfigError;
  }
  if (doc.sweep.size() > kMaxSweepRuns) {
    err << "error: sweep expands to " << doc.sweep.size() << " runs (limit " << kMaxSweepRuns
        << ")\n";
    return kConfigError;
  }
  std::vector<config::RunConfig> runs;
  try {
    runs = expand_sweep(doc);
  } catch (const config::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  struct Outcome {
    std::optional<RunResult> result;
    std::string error;
    bool io_failure = false;
  };
  std::vector<Outcome> outcomes(runs.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < runs.size(); begin += workers) {
    std::vector<std::future<Outcome>> batch;
    const std::size_t end = std::min(runs.size(), begin + workers);
    for (std::size_t k = begin; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, [&runs, &out_dir, k] {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", k);
        Outcome o;
        try {
          o.result = execute(runs[k], out_dir / name);
        } catch (const io::IoError& e) {
          o.error = e.what();
          o.io_failure = true;
        } catch (const std::exception& e) {
          o.error = e.what();
        }
        return o;
      }));
    }
    for (std::size_t k = begin; k < end; ++k) outcomes[k] = batch[k - begin].get();
  }

  std::string index =
      "run,alpha,epsilon,K,n_cells,reason,steps,t,mass,min_m,min_v,max_z,max_w,entropy,"
      "dissipation_rhs,lp_m,lq_v,wave_error,max_principle\n";
  bool all_completed = true;
  bool io_failure = false;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& cfg = runs[k];
    const auto& o = outcomes[k];
    std::ostringstream row;
    row << k << ',' << io::format_double(cfg.params.alpha) << ','
        << io::format_double(cfg.params.epsilon) << ',' << io::format_double(cfg.params.K) << ','
        << cfg.n_cells << ',';
    if (!o.result) {
      all_completed = false;
      io_failure = io_failure || o.io_failure;
      row << "error,0";
      for (int i = 0; i < 10; ++i) row << ",nan";
      row << ",nan,n/a\n";
      if (!quiet) err << "run " << k << " failed: " << o.error << '\n';
    } else {
      const auto& r = *o.result;
      all_completed = all_completed && r.reason == solver::Termination::completed;
      row << solver::to_string(r.reason) << ',' << r.steps;
      std::string cells = io::monitor_csv_line(r.last_row);
      cells.pop_back();
      row << ',' << cells << ',' << (r.wave_error ? io::format_double(*r.wave_error) : "nan")
          << ',';
      if (r.max_principle) row << (r.max_principle->passed ? "pass" : "fail");
      else row << "n/a";
      row << '\n';
    }
    index += row.str();
  }
  try {
    fs::create_directories(out_dir);
    io::write_text_file(out_dir / "index.csv", index);
  } catch (const std::exception& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  }
  if (!quiet) out << "wrote " << (out_dir / "index.csv").string() << " (" << runs.size() << " runs)\n";
  if (io_failure) return kIoError;
  return all_completed ? kSuccess : kBlowUp;
}

std::string analyze_table(const AnalyzeInputs& in) {
  using namespace analysis;
  if (!(in.alpha > 0.0 && in.alpha < 2.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 2)");
  }
  if (!(in.m > 0.0)) throw Error(ErrorCode::NonPositiveDensity, "m must be positive");

  std::ostringstream os;
  const auto line = [&os](const std::string& name, const std::string& value) {
    os << name;
    for (std::size_t k = name.size(); k < 30; ++k) os << ' ';
    os << value << '\n';
  };
  const auto pair = [](Vec2 u) { return "(" + sig9(u.x) + ", " + sig9(u.y) + ")"; };

  const double b = entropy_exponent_b(in.alpha, in.a);
  const auto spec = make_riemann_spec(in.alpha, in.s, in.r);
  line("alpha", sig9(in.alpha));
  line("A(alpha)", sig9(spec.A));
  line("B(alpha)", sig9(spec.B));
  line("theta(alpha)", sig9(theta_alpha(in.alpha)));
  line("entropy a", sig9(in.a));
  line("entropy b(alpha,a)", sig9(b));
  line("-b/a", sig9(-b / in.a));
  line("s", sig9(in.s));
  line("s in S0", spec.s_in_S0() ? "true" : "false");
  line("r", sig9(in.r));
  line("S1 threshold 2B/(B+2)", sig9(s1_threshold(in.alpha)));
  line("r in S1", spec.r_in_S1() ? "true" : "false");
  if (spec.s_in_S0() && spec.r_in_S1()) {
    line("density bound exponent", sig9(density_bound_exponent(spec)));
  } else {
    line("density bound exponent", "n/a (requires s in S0 and r in S1)");
  }
  line("(v, m)", pair({in.v, in.m}));
  const auto eig = eigenstructure(in.v, in.m, in.alpha);
  line("lambda1", sig9(eig.lambda1));
  line("lambda2", sig9(eig.lambda2));
  if (in.v == 0.0) {
    line("eigenvectors", "omitted: hyperbolicity degenerates at v = 0 (lambda1 = lambda2)");
  } else {
    line("r1", pair(eig.r1));
    line("r2", pair(eig.r2));
  }
  const auto g = genuine_nonlinearity(in.v, in.m, in.alpha);
  line("grad(lambda1).r1", sig9(g.g1));
  line("grad(lambda2).r2", sig9(g.g2));
  if (in.v > 0.0) {
    line("z", sig9(riemann_z(spec, in.v, in.m).value));
    line("w", sig9(riemann_w(spec, in.v, in.m).value));
    line("eta = v^a m^b", sig9(entropy_eval(in.a, b, in.v, in.m).value));
  } else {
    line("z, w, eta", "n/a (defined for v > 0)");
  }
  return os.str();
}

int run_analyze(const AnalyzeInputs& in, std::ostream& out, std::ostream& err) {
  try {
    out << analyze_table(in);
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

config::RunConfig default_wave_config() {
  config::RunConfig cfg;
  cfg.params = {0.5, 0.0, 0.0, Coupling::monotone_ff, 1.5};
  cfg.n_cells = 400;
  cfg.t_final = 1.0;
  cfg.initial.kind = config::InitialKind::traveling_wave;
  cfg.initial.profile = {waves::ProfileKind::fourier, 1.0, 0.3, 1, 0.0};
  cfg.initial.sign = 1;
  config::validate_run_config(cfg);
  return cfg;
}

WaveStudy wave_convergence(const config::RunConfig& base, const std::vector<std::size_t>& cells) {
  if (base.initial.kind != config::InitialKind::traveling_wave) {
    throw Error(ErrorCode::InvalidConfig, "wave study needs initial.kind = traveling_wave");
  }
  WaveStudy study;
  const waves::WaveSpec wave = wave_spec(base);
  const double c = waves::wave_speed(wave);
  for (std::size_t n : cells) {
    config::RunConfig cfg = base;
    cfg.n_cells = n;
    const Grid1D grid(n);
    const State start = waves::build_traveling_wave(cfg.initial.profile, wave, cfg.params, grid);
    const double mass0 = diagnostics::mass(start, grid);
    double drift = 0.0;
    const auto traj = solver::advance(start, grid, cfg.t_final, cfg.params, cfg.solver,
                                      [&](const State& s, double, std::size_t) {
                                        drift = std::max(drift, std::abs(diagnostics::mass(s, grid) - mass0));
                                      });
    WaveLevel level;
    level.mass_drift = drift;
    level.n_cells = n;
    level.reason = traj.reason;
    const State& end = traj.final_state();
    const State exact =
        waves::exact_traveling_wave_at(cfg.initial.profile, wave, cfg.params, grid, end.t);
    level.l1_error = diagnostics::l1_distance(end.m, exact.m, grid);
    const double shift = waves::estimate_phase_shift(end.m, cfg.initial.profile, grid);
    level.shift_error = waves::torus_distance(shift, c * end.t);
    study.levels.push_back(level);
  }
  for (std::size_t k = 1; k < study.levels.size(); ++k) {
    const double ratio = study.levels[k - 1].l1_error / study.levels[k].l1_error;
    const double refine = static_cast<double>(study.levels[k].n_cells) /
                          static_cast<double>(study.levels[k - 1].n_cells);
    study.orders.push_back(std::log(ratio) / std::log(refine));
  }
  study.analytic_residual = waves::analytic_wave_residual(
      base.initial.profile, c, base.params, Grid1D(base.n_cells), base.t_final);
  return study;
}

int run_wave_test(const config::RunConfig& cfg, bool quiet, std::ostream& out, std::ostream& err) {
  WaveStudy study;
  try {
    const std::size_t n = cfg.n_cells;
    study = wave_convergence(cfg, {std::max<std::size_t>(n / 2, 8), n, 2 * n});
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  bool completed = true;
  out << "n_cells,l1_error_m,shift_error,order\n";
  for (std::size_t k = 0; k < study.levels.size(); ++k) {
    const auto& level = study.levels[k];
    completed = completed && level.reason == solver::Termination::completed;
    out << level.n_cells << ',' << sig9(level.l1_error) << ',' << sig9(level.shift_error) << ','
        << (k == 0 ? std::string("-") : sig9(study.orders[k - 1])) << '\n';
  }
  if (!quiet) {
    out << "analytic residual: v-equation " << sig9(study.analytic_residual.v_equation)
        << ", m-equation " << sig9(study.analytic_residual.m_equation) << ", scale "
        << sig9(study.analytic_residual.scale) << '\n';
  }
  return completed ? kSuccess : kBlowUp;
}

}  // namespace ffmfg::runner
