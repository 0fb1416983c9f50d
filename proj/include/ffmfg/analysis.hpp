#pragma once

// Closed-form algebra of the congestion system
//   v_t + (v^2 / (2 m^alpha))_x = 0,   m_t - (v m^(1-alpha))_x = 0
// and its coupled variants: flux, Jacobian, eigenstructure, the separable
// entropy family v^a m^b, the Riemann invariants z and w, and the density
// lower bound implied by the invariant region {z < M} ∩ {w < M}.

#include <cstdint>
#include <optional>

#include "ffmfg/core.hpp"

namespace ffmfg::analysis {

/// sqrt(4 - 2 alpha + alpha^2); always >= sqrt(3).
double discriminant_root(double alpha);

/// A(alpha) = 2 - alpha + sqrt(4 - 2 alpha + alpha^2) > 0.
double coefficient_A(double alpha);
/// B(alpha) = 2 - alpha - sqrt(4 - 2 alpha + alpha^2) < 0 for alpha > 0.
double coefficient_B(double alpha);
/// Upper bound 2B/(B+2) on the w exponent for convexity.
double s1_threshold(double alpha);

Vec2 flux_phys(double v, double m, const ModelParams& params);
Matrix2 flux_jacobian(double v, double m, const ModelParams& params);

struct EigenPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Vec2 r1;  // (B v, -2m)
  Vec2 r2;  // (A v, -2m)
};

/// Closed-form eigenvalues and right eigenvectors of the uncoupled Jacobian.
EigenPair eigenstructure(double v, double m, double alpha);

struct NonlinearityProducts {
  double g1 = 0.0;  // grad(lambda1) . r1
  double g2 = 0.0;  // grad(lambda2) . r2
};

NonlinearityProducts genuine_nonlinearity(double v, double m, double alpha);

double theta_alpha(double alpha);

/// Exponent b such that v^a m^b is a convex entropy; requires a < 0 or a > 1.
double entropy_exponent_b(double alpha, double a);

/// Left-hand side of the algebraic compatibility condition on (a, b).
double entropy_condition_residual(double alpha, double a, double b);

struct EntropyPair {
  double a = 0.0;
  double b = 0.0;
};

/// Builds (a, b(alpha, a)) and checks the compatibility residual.
EntropyPair make_entropy_pair(double alpha, double a);

/// Residual of the second-order entropy PDE for eta = v^a m^b.
double entropy_residual_pde(double a, double b, double v, double m, double alpha);

/// Same residual divided by the sum of the absolute values of its three terms.
double entropy_residual_relative(double a, double b, double v, double m, double alpha);

/// Value with first and second partials in (v, m).
struct Jet {
  double value = 0.0;
  Vec2 gradient;
  Matrix2 hessian;
};

/// v^a m^b with closed-form derivatives; v, m > 0.
Jet entropy_eval(double a, double b, double v, double m);

struct RiemannSpec {
  double alpha = 1.0;
  double s = -1.0;
  double r = -2.0;
  double A = 0.0;
  double B = 0.0;

  bool s_in_S0() const { return s < 0.0; }
  bool r_in_S1() const;
};

RiemannSpec make_riemann_spec(double alpha, double s, double r);

/// z = v^(s/A) m^(s/2); annihilates the eigenvector (A v, -2m).
Jet riemann_z(const RiemannSpec& spec, double v, double m);
/// w = v^(r/B) m^(r/2); annihilates the eigenvector (B v, -2m).
Jet riemann_w(const RiemannSpec& spec, double v, double m);

enum class ConvexKind { entropy, z, w };

struct ConvexityReport {
  ConvexKind kind = ConvexKind::entropy;
  std::size_t samples = 0;
  double min_minor1 = 0.0;  // H00 / scale
  double min_minor2 = 0.0;  // det(H) / scale^2
  bool passed = true;
  std::optional<Vec2> witness;
};

/// Samples log-uniform points in [1e-2, 1e2]^2 and records the worst scaled
/// leading principal minors of the Hessian. `exponent` is a, s or r.
ConvexityReport convexity_scan(ConvexKind kind, double exponent, double alpha,
                               std::size_t sample_count, std::uint64_t seed = 12345);

/// Throwing variant: ConvexityViolation names the first witness point.
ConvexityReport convexity_check(ConvexKind kind, double exponent, double alpha,
                                std::size_t sample_count, std::uint64_t seed = 12345);

/// Exponent e such that m_min = M^e on the corner {z = M} ∩ {w = M}.
double density_bound_exponent(const RiemannSpec& spec);
double density_lower_bound(double M, const RiemannSpec& spec);

}  // namespace ffmfg::analysis
