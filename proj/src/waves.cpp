#include "ffmfg/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffmfg/analysis.hpp"

namespace ffmfg::waves {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double x) {
  const double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

}  // namespace

double ProfileSpec::value(double x) const {
  if (kind == ProfileKind::constant) return mean;
  return mean + amplitude * std::sin(kTwoPi * mode * x + phase);
}

double ProfileSpec::derivative(double x) const {
  if (kind == ProfileKind::constant) return 0.0;
  return amplitude * kTwoPi * mode * std::cos(kTwoPi * mode * x + phase);
}

ProfileSpec validate_profile(const ProfileSpec& raw) {
  if (!std::isfinite(raw.mean) || !std::isfinite(raw.amplitude) || !std::isfinite(raw.phase)) {
    throw Error(ErrorCode::NonFinite, "profile parameters must be finite");
  }
  const double amplitude = raw.kind == ProfileKind::constant ? 0.0 : std::abs(raw.amplitude);
  if (!(raw.mean - amplitude > 0.0)) {
    throw Error(ErrorCode::NonPositiveProfile,
                "profile minimum mean - |amplitude| = " + std::to_string(raw.mean - amplitude) +
                    " must be positive");
  }
  if (raw.kind == ProfileKind::fourier && raw.mode < 1) {
    throw Error(ErrorCode::NonPositiveProfile, "Fourier mode must be >= 1");
  }
  return raw;
}

double wave_speed(const WaveSpec& wave) {
  const double sign = wave.sign >= 0 ? 1.0 : -1.0;
  switch (wave.coupling) {
    case Coupling::monotone_ff: return sign * std::sqrt(2.0 * wave.K / 3.0);
    case Coupling::antimonotone: return sign * std::sqrt(2.0 * wave.K);
    case Coupling::none: break;
  }
  throw Error(ErrorCode::DomainError, "traveling waves require a coupling");
}

void validate_wave(const WaveSpec& wave, const ModelParams& params) {
  if (wave.coupling == Coupling::none || !(wave.K > 0.0)) {
    throw Error(ErrorCode::DomainError, "traveling waves require a coupling with K > 0");
  }
  if (wave.coupling != params.coupling || wave.K != params.K) {
    throw Error(ErrorCode::DomainError, "wave coupling does not match the model parameters");
  }
  if (wave.sign != 1 && wave.sign != -1) {
    throw Error(ErrorCode::DomainError, "wave sign must be +1 or -1");
  }
  if (wave.coupling == Coupling::antimonotone && params.alpha != 1.0) {
    throw Error(ErrorCode::AlphaMismatch, "antimonotone traveling waves exist for alpha = 1 only");
  }
}

State sample_translating_profile(const ProfileSpec& profile, double c, double alpha,
                                 const Grid1D& grid, double t) {
  const auto spec = validate_profile(profile);
  State s;
  s.t = t;
  s.v.resize(grid.n_cells());
  s.m.resize(grid.n_cells());
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    const double m = spec.value(wrap_unit(grid.center(i) + c * t));
    s.m[i] = m;
    s.v[i] = c * std::pow(m, alpha);
  }
  return s;
}

State exact_traveling_wave_at(const ProfileSpec& profile, const WaveSpec& wave,
                              const ModelParams& params, const Grid1D& grid, double t) {
  validate_wave(wave, params);
  return validate_state(grid,
                        sample_translating_profile(profile, wave_speed(wave), params.alpha, grid, t));
}

State build_traveling_wave(const ProfileSpec& profile, const WaveSpec& wave,
                           const ModelParams& params, const Grid1D& grid) {
  return exact_traveling_wave_at(profile, wave, params, grid, 0.0);
}

std::vector<double> v_from_value_function(const std::vector<double>& u0, double p,
                                          const Grid1D& grid) {
  if (u0.size() != grid.n_cells()) {
    throw Error(ErrorCode::InvalidGrid, "value function length does not match the grid");
  }
  std::vector<double> v(u0.size());
  const double inv = 1.0 / (2.0 * grid.dx());
  for (std::size_t i = 0; i < u0.size(); ++i) {
    v[i] = p + (u0[grid.neighbor(i, 1)] - u0[grid.neighbor(i, -1)]) * inv;
  }
  return v;
}

State constant_state(double v_bar, double m_bar, const Grid1D& grid) {
  return validate_state(grid, std::vector<double>(grid.n_cells(), v_bar),
                        std::vector<double>(grid.n_cells(), m_bar));
}

State power_law_state(const ProfileSpec& profile, double alpha, const Grid1D& grid) {
  return validate_state(grid, sample_translating_profile(profile, 1.0, alpha, grid, 0.0), true);
}

WaveResidual analytic_wave_residual(const ProfileSpec& profile, double c,
                                    const ModelParams& params, const Grid1D& grid, double t,
                                    TimeConvention convention) {
  const auto spec = validate_profile(profile);
  const double alpha = params.alpha;
  const double flux_sign =
      convention == TimeConvention::printed && params.coupling == Coupling::antimonotone ? -1.0
                                                                                          : 1.0;
  WaveResidual out;
  double max_vt = 0.0;
  double max_flux = 0.0;
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    const double xi = wrap_unit(grid.center(i) + c * t);
    const double m = spec.value(xi);
    const double m_x = spec.derivative(xi);
    const double m_t = c * m_x;
    const double v = c * std::pow(m, alpha);
    const double dv_dm = c * alpha * std::pow(m, alpha - 1.0);
    const double v_x = dv_dm * m_x;
    const double v_t = dv_dm * m_t;

    const Matrix2 jac = analysis::flux_jacobian(v, m, params);
    const double flux_v = flux_sign * (jac.a00 * v_x + jac.a01 * m_x);
    const double flux_m = jac.a10 * v_x + jac.a11 * m_x;
    out.v_equation = std::max(out.v_equation, std::abs(v_t + flux_v));
    out.m_equation = std::max(out.m_equation, std::abs(m_t + flux_m));
    max_vt = std::max(max_vt, std::abs(v_t));
    max_flux = std::max(max_flux, std::abs(flux_v));
  }
  out.scale = max_vt + max_flux;
  return out;
}

double estimate_phase_shift(const std::vector<double>& m, const ProfileSpec& profile,
                            const Grid1D& grid) {
  const std::size_t n = grid.n_cells();
  double mean = 0.0;
  for (double x : m) mean += x;
  mean /= static_cast<double>(n);

  // Correlation at shifts d_k = k dx, then a parabolic refinement of the peak.
  std::vector<double> corr(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = static_cast<double>(k) * grid.dx();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += (m[i] - mean) * (profile.value(wrap_unit(grid.center(i) + d)) - profile.mean);
    }
    corr[k] = acc;
  }
  const auto best = static_cast<std::size_t>(
      std::distance(corr.begin(), std::max_element(corr.begin(), corr.end())));
  const double left = corr[grid.neighbor(best, -1)];
  const double mid = corr[best];
  const double right = corr[grid.neighbor(best, 1)];
  const double curvature = left - 2.0 * mid + right;
  double offset = 0.0;
  if (curvature < 0.0) offset = 0.5 * (left - right) / curvature;
  return wrap_unit((static_cast<double>(best) + offset) * grid.dx());
}

double torus_distance(double a, double b) {
  const double d = wrap_unit(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace ffmfg::waves
