#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ffmfg/analysis.hpp"
#include "ffmfg/config.hpp"
#include "ffmfg/diagnostics.hpp"
#include "ffmfg/runner.hpp"
#include "ffmfg/solver.hpp"
#include "ffmfg/verify.hpp"
#include "ffmfg/waves.hpp"

namespace py = pybind11;
using namespace ffmfg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& x) { return Array(static_cast<py::ssize_t>(x.size()), x.data()); }

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

ModelParams make_params(double alpha, double epsilon, const std::string& coupling, double K) {
  return validate_params({alpha, epsilon, 0.0, coupling_from_string(coupling), K});
}

py::dict state_dict(const State& s, const Grid1D& grid) {
  py::dict d;
  d["t"] = s.t;
  d["x"] = to_array(grid.centers());
  d["v"] = to_array(s.v);
  d["m"] = to_array(s.m);
  return d;
}

py::tuple vec(Vec2 u) { return py::make_tuple(u.x, u.y); }

py::dict jet_dict(const analysis::Jet& j) {
  py::dict d;
  d["value"] = j.value;
  d["gradient"] = vec(j.gradient);
  d["hessian"] = py::make_tuple(py::make_tuple(j.hessian.a00, j.hessian.a01),
                                py::make_tuple(j.hessian.a10, j.hessian.a11));
  return d;
}

py::dict row_dict(const diagnostics::MonitorRow& r) {
  py::dict d;
  d["t"] = r.t;
  d["mass"] = r.mass;
  d["min_m"] = r.min_m;
  d["min_v"] = r.min_v;
  d["max_z"] = r.max_z;
  d["max_w"] = r.max_w;
  d["entropy"] = r.entropy;
  d["dissipation_rhs"] = r.dissipation_rhs;
  d["lp_m"] = r.lp_m;
  d["lq_v"] = r.lq_v;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ffmfg, m) {
  m.doc() = "Forward-forward mean-field game congestion models: closed forms, solver, diagnostics";

  py::register_exception<Error>(m, "FfmfgError", PyExc_ValueError);
  py::register_exception<config::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("coefficients", [](double alpha) {
    make_params(alpha, 0.0, "none", 0.0);
    return py::make_tuple(analysis::coefficient_A(alpha), analysis::coefficient_B(alpha));
  }, py::arg("alpha"), "(A, B) = 2 - alpha +- sqrt(4 - 2 alpha + alpha^2)");
  m.def("s1_threshold", &analysis::s1_threshold, py::arg("alpha"));
  m.def("theta", &analysis::theta_alpha, py::arg("alpha"));
  m.def("entropy_exponent_b", &analysis::entropy_exponent_b, py::arg("alpha"), py::arg("a"));
  m.def("entropy_residual", &analysis::entropy_residual_relative, py::arg("a"), py::arg("b"),
        py::arg("v"), py::arg("m"), py::arg("alpha"));
  m.def("entropy", [](double a, double b, double v, double mm) { return jet_dict(analysis::entropy_eval(a, b, v, mm)); },
        py::arg("a"), py::arg("b"), py::arg("v"), py::arg("m"));

  m.def("flux", [](double v, double mm, double alpha, const std::string& coupling, double K) {
    return vec(analysis::flux_phys(v, mm, make_params(alpha, 0.0, coupling, K)));
  }, py::arg("v"), py::arg("m"), py::arg("alpha"), py::arg("coupling") = "none", py::arg("K") = 0.0);

  m.def("eigenstructure", [](double v, double mm, double alpha) {
    make_params(alpha, 0.0, "none", 0.0);
    const auto e = analysis::eigenstructure(v, mm, alpha);
    const auto g = analysis::genuine_nonlinearity(v, mm, alpha);
    py::dict d;
    d["lambda1"] = e.lambda1;
    d["lambda2"] = e.lambda2;
    d["r1"] = vec(e.r1);
    d["r2"] = vec(e.r2);
    d["g1"] = g.g1;
    d["g2"] = g.g2;
    return d;
  }, py::arg("v"), py::arg("m"), py::arg("alpha"));

  m.def("riemann_invariants", [](double alpha, double s, double r, double v, double mm) {
    const auto spec = analysis::make_riemann_spec(alpha, s, r);
    return py::make_tuple(jet_dict(analysis::riemann_z(spec, v, mm)), jet_dict(analysis::riemann_w(spec, v, mm)));
  }, py::arg("alpha"), py::arg("s"), py::arg("r"), py::arg("v"), py::arg("m"));

  m.def("density_lower_bound", [](double M, double alpha, double s, double r) {
    return analysis::density_lower_bound(M, analysis::make_riemann_spec(alpha, s, r));
  }, py::arg("M"), py::arg("alpha"), py::arg("s"), py::arg("r"));

  m.def("wave_speed", [](const std::string& coupling, double K, int sign) {
    return waves::wave_speed({coupling_from_string(coupling), K, sign});
  }, py::arg("coupling"), py::arg("K"), py::arg("sign") = 1);

  m.def("traveling_wave", [](std::size_t n_cells, double alpha, const std::string& coupling, double K,
                             int sign, double amplitude, int mode, double t) {
    const Grid1D grid(n_cells);
    waves::ProfileSpec profile;
    profile.amplitude = amplitude;
    profile.mode = mode;
    const waves::WaveSpec wave{coupling_from_string(coupling), K, sign};
    return state_dict(waves::exact_traveling_wave_at(profile, wave, make_params(alpha, 0.0, coupling, K), grid, t),
                      grid);
  }, py::arg("n_cells"), py::arg("alpha"), py::arg("coupling"), py::arg("K"), py::arg("sign") = 1,
     py::arg("amplitude") = 0.3, py::arg("mode") = 1, py::arg("t") = 0.0);

  m.def("simulate", [](const Array& v, const Array& mm, double t_final, double alpha, double epsilon,
                       const std::string& coupling, double K, double cfl, const std::string& limiter,
                       std::size_t max_steps) {
    auto vv = to_vector(v);
    auto mv = to_vector(mm);
    const Grid1D grid(vv.size());
    const ModelParams params = make_params(alpha, epsilon, coupling, K);
    solver::SolverConfig cfg;
    cfg.cfl = cfl;
    cfg.limiter = solver::limiter_from_string(limiter);
    cfg.max_steps = max_steps;
    cfg.store_every = max_steps;
    const State start = validate_state(grid, std::move(vv), std::move(mv));
    solver::Trajectory traj;
    {
      py::gil_scoped_release release;
      traj = solver::advance(start, grid, t_final, params, solver::validate_config(cfg));
    }
    py::dict d = state_dict(traj.final_state(), grid);
    d["reason"] = std::string(solver::to_string(traj.reason));
    d["steps"] = traj.steps;
    d["mass"] = diagnostics::mass(traj.final_state(), grid);
    d["detail"] = traj.detail;
    return d;
  }, py::arg("v"), py::arg("m"), py::arg("t_final"), py::arg("alpha"), py::arg("epsilon") = 0.0,
     py::arg("coupling") = "none", py::arg("K") = 0.0, py::arg("cfl") = 0.4, py::arg("limiter") = "none",
     py::arg("max_steps") = 50'000'000);

  m.def("mass", [](const Array& mm) {
    const auto mv = to_vector(mm);
    const Grid1D grid(mv.size());
    return diagnostics::mass(validate_state(grid, std::vector<double>(mv.size(), 0.0), mv), grid);
  }, py::arg("m"));

  m.def("run_config", [](const std::string& text) {
    const auto cfg = config::parse_config(text);
    runner::RunResult result;
    {
      py::gil_scoped_release release;
      result = runner::execute(cfg, std::nullopt);
    }
    py::dict d = state_dict(result.final_state, Grid1D(cfg.n_cells));
    d["reason"] = std::string(solver::to_string(result.reason));
    d["steps"] = result.steps;
    d["first"] = row_dict(result.first_row);
    d["last"] = row_dict(result.last_row);
    d["wave_error"] = result.wave_error ? py::cast(*result.wave_error) : py::none();
    d["max_principle"] = result.max_principle ? py::cast(result.max_principle->passed) : py::none();
    return d;
  }, py::arg("text"), "Runs a configuration document without writing files.");

  m.def("analyze", [](double alpha, double a, double s, double r, double v, double mm) {
    return runner::analyze_table({alpha, a, s, r, v, mm});
  }, py::arg("alpha") = 1.0, py::arg("a") = 2.0, py::arg("s") = -1.0, py::arg("r") = -2.0,
     py::arg("v") = 1.0, py::arg("m") = 1.0);

  m.def("verify", [](double entropy_tol) {
    std::vector<py::dict> out;
    for (const auto& g : verify::run_groups({entropy_tol, verify::Options{}.seed})) {
      py::dict d;
      d["name"] = g.name;
      d["checks"] = g.checks;
      d["failures"] = g.failures;
      d["passed"] = g.passed();
      d["witness"] = g.witness ? py::cast(*g.witness) : py::none();
      out.push_back(d);
    }
    return out;
  }, py::arg("entropy_tol") = 1e-9);
}
