#pragma once

// Exact solutions and initial-data constructors: traveling waves of the
// coupled systems, single-mode Fourier profiles, constant states and the
// v = p + u_x reduction from a sampled value function.

#include <vector>

#include "ffmfg/core.hpp"

namespace ffmfg::waves {

enum class ProfileKind { fourier, constant };

/// m0(x) = mean + amplitude * sin(2 pi mode x + phase).
struct ProfileSpec {
  ProfileKind kind = ProfileKind::fourier;
  double mean = 1.0;
  double amplitude = 0.3;
  int mode = 1;
  double phase = 0.0;

  double value(double x) const;
  double derivative(double x) const;
  bool normalized() const { return mean == 1.0; }
};

ProfileSpec validate_profile(const ProfileSpec& raw);

struct WaveSpec {
  Coupling coupling = Coupling::monotone_ff;
  double K = 1.5;
  int sign = 1;
};

/// c = sign sqrt(2K/3) (monotone_ff) or sign sqrt(2K) (antimonotone); the
/// profile is transported as m(x, t) = m0(x + c t) and v = c m^alpha.
double wave_speed(const WaveSpec& wave);

void validate_wave(const WaveSpec& wave, const ModelParams& params);

State build_traveling_wave(const ProfileSpec& profile, const WaveSpec& wave,
                           const ModelParams& params, const Grid1D& grid);

State exact_traveling_wave_at(const ProfileSpec& profile, const WaveSpec& wave,
                              const ModelParams& params, const Grid1D& grid, double t);

/// m = m0(x + c t), v = c m^alpha for an arbitrary c (used for falsification).
State sample_translating_profile(const ProfileSpec& profile, double c, double alpha,
                                 const Grid1D& grid, double t);

/// v_i = p + (u0_{i+1} - u0_{i-1}) / (2 dx) with periodic wrap.
std::vector<double> v_from_value_function(const std::vector<double>& u0, double p,
                                          const Grid1D& grid);

State constant_state(double v_bar, double m_bar, const Grid1D& grid);

/// m = m0, v = m0^alpha: data lying inside v > 0, m > 0.
State power_law_state(const ProfileSpec& profile, double alpha, const Grid1D& grid);

/// Which time sign the velocity equation carries. For the antimonotone system,
/// `conservative` is v_t - (v^2/(2m^alpha) + K m^alpha)_x = 0 (what the solver
/// integrates) and `printed` is v_t + (v^2/(2m^alpha) + K m^alpha)_x = 0. The two
/// agree for the other couplings.
enum class TimeConvention { conservative, printed };

struct WaveResidual {
  double v_equation = 0.0;  // max |residual| of the velocity equation
  double m_equation = 0.0;  // max |residual| of the density equation
  double scale = 0.0;       // max |v_t| + max |flux term|, for relative statements
};

/// Substitutes m = m0(x + c t), v = c m^alpha into the PDE with exact
/// derivatives of the profile, at the cell centers of `grid`.
WaveResidual analytic_wave_residual(const ProfileSpec& profile, double c,
                                    const ModelParams& params, const Grid1D& grid, double t,
                                    TimeConvention convention = TimeConvention::conservative);

/// Shift d in [0, 1) maximizing the circular correlation of m with m0(x + d).
double estimate_phase_shift(const std::vector<double>& m, const ProfileSpec& profile,
                            const Grid1D& grid);

/// Distance between two points of the unit torus.
double torus_distance(double a, double b);

}  // namespace ffmfg::waves
