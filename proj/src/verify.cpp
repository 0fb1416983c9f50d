#include "ffmfg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "ffmfg/analysis.hpp"
#include "ffmfg/diagnostics.hpp"
#include "ffmfg/oracle.hpp"
#include "ffmfg/solver.hpp"
#include "ffmfg/waves.hpp"

namespace ffmfg::verify {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Log-uniform point of [lo, hi]^2.
Vec2 point(Rng& rng, double lo = 0.1, double hi = 10.0) {
  return {std::exp(uniform(rng, std::log(lo), std::log(hi))),
          std::exp(uniform(rng, std::log(lo), std::log(hi)))};
}

class Group {
 public:
  explicit Group(std::string name) { result_.name = std::move(name); }

  // Records one check; `describe` is only evaluated for the first failure.
  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checks;
    if (ok) return;
    ++result_.failures;
    if (!result_.witness) result_.witness = describe();
  }

  GroupResult take() { return std::move(result_); }

 private:
  GroupResult result_;
};

std::string fmt(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream os;
  os.precision(9);
  bool first = true;
  for (const auto& [name, value] : items) {
    os << (first ? "" : ", ") << name << " = " << value;
    first = false;
  }
  return os.str();
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double vec_gap(Vec2 a, Vec2 b) { return norm(a - b) / std::max({norm(a), norm(b), 1e-300}); }

double mat_gap(const Matrix2& a, const Matrix2& b) {
  const Matrix2 d{a.a00 - b.a00, a.a01 - b.a01, a.a10 - b.a10, a.a11 - b.a11};
  return d.max_abs() / std::max({a.max_abs(), b.max_abs(), 1e-300});
}

GroupResult entropy_family(const Options& opt, Rng& rng) {
  Group g("entropy family");
  for (int k = 0; k < 200; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double a = uniform(rng, 1.1, 20.0);
    const double b = analysis::entropy_exponent_b(alpha, a);
    for (int j = 0; j < 10; ++j) {
      const Vec2 p = point(rng);
      const double res = analysis::entropy_residual_relative(a, b, p.x, p.y, alpha);
      g.check(res <= opt.entropy_tol, [&] {
        return fmt({{"alpha", alpha}, {"a", a}, {"v", p.x}, {"m", p.y}, {"residual", res}});
      });
    }
  }
  for (int k = 0; k < 20; ++k) {
    const double alpha = 0.05 + 1.9 * (k + 0.5) / 20.0;
    const double a = 1e6;
    const double limit = -analysis::entropy_exponent_b(alpha, a) / a;
    const double theta = analysis::theta_alpha(alpha);
    g.check(std::abs(limit - theta) <= 1e-5, [&] {
      return fmt({{"alpha", alpha}, {"-b/a", limit}, {"theta", theta}});
    });
  }
  return g.take();
}

GroupResult jets_vs_finite_differences(Rng& rng) {
  Group g("closed-form jets vs finite differences");
  for (int k = 0; k < 100; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double a = uniform(rng, 1.1, 6.0);
    const double b = analysis::entropy_exponent_b(alpha, a);
    const auto spec = analysis::make_riemann_spec(alpha, uniform(rng, -3.0, -0.1),
                                                  uniform(rng, 1.01, 1.5) * analysis::s1_threshold(alpha));
    const Vec2 p = point(rng);
    const std::pair<const char*, std::function<analysis::Jet(double, double)>> fields[] = {
        {"eta", [&](double v, double m) { return analysis::entropy_eval(a, b, v, m); }},
        {"z", [&](double v, double m) { return analysis::riemann_z(spec, v, m); }},
        {"w", [&](double v, double m) { return analysis::riemann_w(spec, v, m); }}};
    for (const auto& [name, field] : fields) {
      const auto jet = field(p.x, p.y);
      const auto fd = oracle::fd_derivatives([&](double v, double m) { return field(v, m).value; }, p);
      const double gg = vec_gap(jet.gradient, fd.gradient);
      const double hg = mat_gap(jet.hessian, fd.hessian);
      g.check(gg <= 1e-6 && hg <= 1e-6, [&] {
        return std::string(name) + ": " +
               fmt({{"alpha", alpha}, {"v", p.x}, {"m", p.y}, {"grad gap", gg}, {"hessian gap", hg}});
      });
    }
  }
  return g.take();
}

GroupResult flux_jacobians(Rng& rng) {
  Group g("flux Jacobian vs finite differences");
  for (int k = 0; k < 100; ++k) {
    ModelParams params;
    const int which = k % 3;
    params.alpha = which == 2 ? 1.0 : uniform(rng, 0.05, 1.95);
    params.coupling = which == 0 ? Coupling::none
                      : which == 1 ? Coupling::monotone_ff
                                   : Coupling::antimonotone;
    params.K = which == 0 ? 0.0 : uniform(rng, 0.1, 3.0);
    const Vec2 p = point(rng, 0.5, 2.0);
    const Matrix2 jac = analysis::flux_jacobian(p.x, p.y, params);
    const auto f1 = oracle::fd_derivatives(
        [&](double v, double m) { return analysis::flux_phys(v, m, params).x; }, p);
    const auto f2 = oracle::fd_derivatives(
        [&](double v, double m) { return analysis::flux_phys(v, m, params).y; }, p);
    const Matrix2 fd{f1.gradient.x, f1.gradient.y, f2.gradient.x, f2.gradient.y};
    const double gap = mat_gap(jac, fd);
    g.check(gap <= 1e-7, [&] {
      return fmt({{"coupling", static_cast<double>(which)}, {"alpha", params.alpha},
                  {"v", p.x}, {"m", p.y}, {"gap", gap}});
    });
  }
  return g.take();
}

GroupResult eigenstructure(Rng& rng) {
  Group g("eigenstructure");
  ModelParams params;
  for (int k = 0; k < 100; ++k) {
    params.alpha = uniform(rng, 0.05, 1.95);
    const Vec2 p = point(rng);
    const Matrix2 jac = analysis::flux_jacobian(p.x, p.y, params);
    const auto e = analysis::eigenstructure(p.x, p.y, params.alpha);
    for (const auto& [lambda, r] : {std::pair{e.lambda1, e.r1}, std::pair{e.lambda2, e.r2}}) {
      const double res = norm(jac * r - lambda * r) / (norm(r) * std::max(std::abs(lambda), 1.0));
      g.check(res <= 1e-10, [&] {
        return fmt({{"alpha", params.alpha}, {"v", p.x}, {"m", p.y}, {"residual", res}});
      });
    }
    const auto num = oracle::eig2_numeric(jac);
    const double scale = std::max({std::abs(e.lambda1), std::abs(e.lambda2), 1e-300});
    const double gap =
        std::max(std::abs(num.lambda1 - e.lambda1), std::abs(num.lambda2 - e.lambda2)) / scale;
    // Parallel eigenvectors have zero cross product.
    const auto cross = [](Vec2 a, Vec2 b) { return (a.x * b.y - a.y * b.x) / (norm(a) * norm(b)); };
    const double vgap = std::max(std::abs(cross(num.r1, e.r1)), std::abs(cross(num.r2, e.r2)));
    g.check(!num.complex && gap <= 1e-10 && vgap <= 1e-8, [&] {
      return fmt({{"alpha", params.alpha}, {"v", p.x}, {"m", p.y}, {"eigenvalue gap", gap},
                  {"eigenvector gap", vgap}});
    });
    const auto gnl = analysis::genuine_nonlinearity(p.x, p.y, params.alpha);
    g.check(gnl.g1 < 0.0 && gnl.g2 > 0.0, [&] {
      return fmt({{"alpha", params.alpha}, {"v", p.x}, {"m", p.y}, {"g1", gnl.g1},
                  {"g2", gnl.g2}});
    });
    const auto flat = analysis::genuine_nonlinearity(0.0, p.y, params.alpha);
    g.check(flat.g1 == 0.0 && flat.g2 == 0.0, [&] {
      return fmt({{"alpha", params.alpha}, {"m", p.y}, {"g1", flat.g1}, {"g2", flat.g2}});
    });
  }
  return g.take();
}

GroupResult riemann_invariants(Rng& rng) {
  Group g("Riemann invariants");
  for (int k = 0; k < 100; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double s = uniform(rng, -3.0, -0.1);
    const double r = uniform(rng, 1.5, 1.01) * analysis::s1_threshold(alpha);
    const auto spec = analysis::make_riemann_spec(alpha, s, r);
    const Vec2 p = point(rng);
    const auto e = analysis::eigenstructure(p.x, p.y, alpha);
    const auto z = analysis::riemann_z(spec, p.x, p.y);
    const auto w = analysis::riemann_w(spec, p.x, p.y);
    // z is constant along the fast family, w along the slow one.
    const double dz = std::abs(dot(z.gradient, e.r2)) / (norm(z.gradient) * norm(e.r2));
    const double dw = std::abs(dot(w.gradient, e.r1)) / (norm(w.gradient) * norm(e.r1));
    g.check(dz <= 1e-10 && dw <= 1e-10, [&] {
      return fmt({{"alpha", alpha}, {"s", s}, {"r", r}, {"v", p.x}, {"m", p.y}, {"z.r2", dz},
                  {"w.r1", dw}});
    });
    const Vec2 q = point(rng, 0.5, 2.0);
    const auto zfd = oracle::fd_derivatives(
        [&](double v, double m) { return analysis::riemann_z(spec, v, m).value; }, q);
    const auto zq = analysis::riemann_z(spec, q.x, q.y);
    const double gap = std::max(vec_gap(zq.gradient, zfd.gradient), mat_gap(zq.hessian, zfd.hessian) * 1e-3);
    g.check(gap <= 1e-7, [&] {
      return fmt({{"alpha", alpha}, {"s", s}, {"v", q.x}, {"m", q.y}, {"gap", gap}});
    });
  }
  return g.take();
}

GroupResult convexity(Rng&) {
  Group g("convexity sampling");
  for (int k = 0; k < 20; ++k) {
    const double alpha = 0.05 + 1.9 * (k + 0.5) / 20.0;
    const double threshold = analysis::s1_threshold(alpha);
    const auto zs = analysis::convexity_scan(analysis::ConvexKind::z, -1.0, alpha, 1000);
    const auto inside = analysis::convexity_scan(analysis::ConvexKind::w, 1.1 * threshold, alpha, 1000);
    const auto outside = analysis::convexity_scan(analysis::ConvexKind::w, 0.9 * threshold, alpha, 1000);
    const auto eta = analysis::convexity_scan(analysis::ConvexKind::entropy, 2.0, alpha, 1000);
    g.check(zs.passed && inside.passed && eta.passed, [&] {
      return fmt({{"alpha", alpha}, {"z minor2", zs.min_minor2}, {"w minor2", inside.min_minor2},
                  {"eta minor2", eta.min_minor2}});
    });
    g.check(!outside.passed && outside.witness.has_value(), [&] {
      return fmt({{"alpha", alpha}, {"r", 0.9 * threshold}, {"w minor2", outside.min_minor2}});
    });
  }
  return g.take();
}

GroupResult density_bound(Rng& rng) {
  Group g("density lower bound vs level-set solve");
  for (int k = 0; k < 100; ++k) {
    const double alpha = uniform(rng, 0.05, 1.95);
    const double M = uniform(rng, 0.5, 5.0);
    const double s = uniform(rng, -3.0, -0.1);
    const double r = uniform(rng, 1.5, 1.01) * analysis::s1_threshold(alpha);
    const auto spec = analysis::make_riemann_spec(alpha, s, r);
    const double closed = analysis::density_lower_bound(M, spec);
    const Vec2 corner = oracle::level_set_solve(M, spec);
    const double gap = std::abs(std::log(closed) - std::log(corner.y));
    g.check(gap <= 1e-12, [&] {
      return fmt({{"alpha", alpha}, {"M", M}, {"s", s}, {"r", r}, {"log gap", gap}});
    });
  }
  return g.take();
}

GroupResult numerical_flux(Rng& rng) {
  Group g("finite-volume scheme");
  for (int k = 0; k < 50; ++k) {
    ModelParams params;
    params.alpha = uniform(rng, 0.2, 1.8);
    params.coupling = k % 2 == 0 ? Coupling::none : Coupling::monotone_ff;
    params.K = k % 2 == 0 ? 0.0 : uniform(rng, 0.1, 2.0);
    const Vec2 p = point(rng, 0.5, 2.0);
    const auto num = solver::rusanov_interface_flux(p, p, params);
    const Vec2 phys = analysis::flux_phys(p.x, p.y, params);
    const double gap = vec_gap(num.flux, phys);
    g.check(gap <= 1e-14, [&] {
      return fmt({{"alpha", params.alpha}, {"v", p.x}, {"m", p.y}, {"consistency gap", gap}});
    });
  }

  const Grid1D grid(64);
  ModelParams params;
  params.alpha = 0.7;
  params.epsilon = 0.02;
  const State flat = waves::constant_state(1.3, 1.0, grid);
  for (auto limiter : {solver::Limiter::none, solver::Limiter::minmod, solver::Limiter::van_leer}) {
    solver::SolverConfig cfg;
    cfg.limiter = limiter;
    const auto rhs = solver::semidiscrete_rhs(flat, grid, params, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      worst = std::max({worst, std::abs(rhs.dv[i]), std::abs(rhs.dm[i])});
    }
    g.check(worst <= 1e-12, [&] { return fmt({{"constant-state rhs", worst}}); });

    const waves::ProfileSpec profile;
    const State start = waves::power_law_state(profile, params.alpha, grid);
    const auto traj = solver::advance(start, grid, 0.2, params, cfg);
    double drift = 0.0;
    for (const auto& snap : traj.snapshots) {
      drift = std::max(drift, std::abs(diagnostics::mass(snap.state, grid) - 1.0));
    }
    g.check(traj.reason == solver::Termination::completed && drift <= 1e-12, [&] {
      return fmt({{"mass drift", drift}, {"steps", static_cast<double>(traj.steps)}});
    });
  }
  return g.take();
}

GroupResult traveling_waves(Rng&) {
  Group g("traveling-wave residuals");
  const Grid1D grid(256);
  const waves::ProfileSpec profile;
  struct Case {
    double alpha;
    Coupling coupling;
    double K;
  };
  for (const Case& c : {Case{0.5, Coupling::monotone_ff, 1.5}, Case{1.0, Coupling::monotone_ff, 0.8},
                        Case{1.5, Coupling::monotone_ff, 2.0}, Case{1.0, Coupling::antimonotone, 0.5}}) {
    ModelParams params{c.alpha, 0.0, 0.0, c.coupling, c.K};
    for (int sign : {1, -1}) {
      const double speed = waves::wave_speed({c.coupling, c.K, sign});
      const auto res = waves::analytic_wave_residual(profile, speed, params, grid, 0.37);
      const double worst = std::max(res.v_equation, res.m_equation);
      g.check(worst <= 1e-12 * res.scale, [&] {
        return fmt({{"alpha", c.alpha}, {"K", c.K}, {"c", speed}, {"residual", worst},
                    {"scale", res.scale}});
      });
    }
    const double speed = waves::wave_speed({c.coupling, c.K, 1});
    const auto wrong = waves::analytic_wave_residual(profile, 1.1 * speed, params, grid, 0.37);
    g.check(wrong.v_equation >= 1e-2 * wrong.scale, [&] {
      return fmt({{"alpha", c.alpha}, {"perturbed-speed residual", wrong.v_equation},
                  {"scale", wrong.scale}});
    });
    if (c.coupling == Coupling::antimonotone) {
      const auto printed = waves::analytic_wave_residual(profile, speed, params, grid, 0.37,
                                                         waves::TimeConvention::printed);
      g.check(printed.v_equation >= 1e-2 * printed.scale, [&] {
        return fmt({{"printed residual", printed.v_equation}, {"scale", printed.scale}});
      });
    }
  }
  return g.take();
}

GroupResult short_runs(Rng&) {
  Group g("short simulations");
  {
    const Grid1D grid(200);
    const ModelParams params{0.5, 0.0, 0.0, Coupling::monotone_ff, 1.5};
    const waves::WaveSpec wave{Coupling::monotone_ff, 1.5, 1};
    const waves::ProfileSpec profile;
    const State start = waves::build_traveling_wave(profile, wave, params, grid);
    const auto traj = solver::advance(start, grid, 0.5, params, {});
    const double shift = waves::estimate_phase_shift(traj.final_state().m, profile, grid);
    const double miss = waves::torus_distance(shift, waves::wave_speed(wave) * 0.5);
    g.check(traj.reason == solver::Termination::completed && miss <= 2.0 * grid.dx(), [&] {
      return fmt({{"phase shift", shift}, {"expected", waves::wave_speed(wave) * 0.5}});
    });
  }
  {
    const Grid1D grid(100);
    const ModelParams params{1.0, 0.05, 0.0, Coupling::none, 0.0};
    const auto spec = diagnostics::make_monitor_spec(1.0, 2.0, -1.0, -2.0);
    diagnostics::MonitorRecorder recorder(grid, params, spec);
    const auto traj = solver::advance(waves::power_law_state({}, 1.0, grid), grid, 1.0, params, {},
                                      recorder.observer());
    const auto& series = recorder.series();
    const double M = 1.05 * std::max(series.rows.front().max_z, series.rows.front().max_w);
    const auto mp = diagnostics::maximum_principle_check(series, M, 1e-2);
    const auto diss = diagnostics::entropy_dissipation_check(series);
    g.check(traj.reason == solver::Termination::completed && mp.passed, [&] {
      return fmt({{"M", M}, {"max invariant", mp.max_invariant}, {"min m", mp.min_m},
                  {"bound", mp.density_bound}});
    });
    g.check(diss.monotone, [&] { return fmt({{"largest entropy increase", diss.max_increase}}); });
  }
  return g.take();
}

GroupResult monitors(Rng&) {
  Group g("monitors");
  const Grid1D grid(32);
  ModelParams params;
  params.epsilon = 0.1;
  const auto spec = diagnostics::make_monitor_spec(1.0, 2.0, -1.0, -2.0);
  const auto row = diagnostics::monitor_row(waves::constant_state(2.0, 1.0, grid), grid, params, spec);
  const double eta = analysis::entropy_eval(2.0, spec.entropy.b, 2.0, 1.0).value;
  g.check(row.dissipation_rhs == 0.0 && std::abs(row.mass - 1.0) <= 1e-14 &&
              rel_gap(row.entropy, eta) <= 1e-13,
          [&] {
            return fmt({{"dissipation", row.dissipation_rhs}, {"mass", row.mass},
                        {"entropy", row.entropy}, {"expected", eta}});
          });

  diagnostics::MonitorSeries series;
  series.spec = spec;
  series.epsilon = 0.1;
  for (int k = 0; k < 20; ++k) {
    diagnostics::MonitorRow r;
    r.t = 0.1 * k;
    r.entropy = 3.0 - 0.5 * r.t;
    r.dissipation_rhs = -0.5;
    series.rows.push_back(r);
  }
  const auto report = diagnostics::entropy_dissipation_check(series);
  g.check(report.agreement_fraction == 1.0 && report.monotone, [&] {
    return fmt({{"agreement", report.agreement_fraction}});
  });
  return g.take();
}

}  // namespace

std::vector<GroupResult> run_groups(const Options& options) {
  Rng rng(options.seed);
  std::vector<GroupResult> out;
  out.push_back(entropy_family(options, rng));
  out.push_back(jets_vs_finite_differences(rng));
  out.push_back(flux_jacobians(rng));
  out.push_back(eigenstructure(rng));
  out.push_back(riemann_invariants(rng));
  out.push_back(convexity(rng));
  out.push_back(density_bound(rng));
  out.push_back(numerical_flux(rng));
  out.push_back(traveling_waves(rng));
  out.push_back(short_runs(rng));
  out.push_back(monitors(rng));
  return out;
}

int run_verify(const Options& options, std::ostream& out) {
  bool ok = true;
  for (const auto& group : run_groups(options)) {
    ok = ok && group.passed();
    out << (group.passed() ? "PASS " : "FAIL ") << group.name << " (" << group.checks
        << " checks";
    if (!group.passed()) out << ", " << group.failures << " failed";
    out << ")\n";
    if (group.witness) out << "     witness: " << *group.witness << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace ffmfg::verify
