#pragma once

// Brute-force cross-checks kept independent of the closed forms in analysis:
// central-difference derivatives, a quadratic-formula 2x2 eigensolver and the
// log-linear intersection of the level sets {z = M} and {w = M}.

#include <functional>

#include "ffmfg/analysis.hpp"
#include "ffmfg/core.hpp"

namespace ffmfg::oracle {

struct FDConfig {
  double h = 1e-5;          // gradient step
  double hessian_h = 1e-3;  // second differences lose ~eps/h^2 to roundoff, so step wider
  bool relative_scale = true;  // steps scale with |coordinate| (absolute at 0)
};

struct FDResult {
  Vec2 gradient;
  Matrix2 hessian;
};

using ScalarField = std::function<double(double v, double m)>;

/// Central differences (Richardson-extrapolated for the Hessian); the stencil must stay inside v > 0, m > 0.
FDResult fd_derivatives(const ScalarField& f, Vec2 point, const FDConfig& cfg = {});

struct Eigen2 {
  bool complex = false;
  double lambda1 = 0.0;  // real parts, lambda1 <= lambda2
  double lambda2 = 0.0;
  double imag = 0.0;     // |imaginary part| when complex
  Vec2 r1;               // right eigenvectors (unset when complex)
  Vec2 r2;
};

Eigen2 eig2_numeric(const Matrix2& mat);

/// Spectral-radius estimate used for upwinding: max |lambda| when real,
/// |trace|/2 + sqrt(|det|) when the eigenvalues are complex.
double spectral_radius(const Eigen2& eig, const Matrix2& mat);

/// Intersection (v*, m*) of {z = M} and {w = M}, solved linearly in (ln v, ln m).
Vec2 level_set_solve(double M, const analysis::RiemannSpec& spec);

}  // namespace ffmfg::oracle
