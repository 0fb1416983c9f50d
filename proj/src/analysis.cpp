#include "ffmfg/analysis.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace ffmfg::analysis {
namespace {

void require_density(double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::NonPositiveDensity, "m = " + std::to_string(m));
}

void require_region(double v, double m) {
  if (!(v > 0.0) || !(m > 0.0)) {
    std::ostringstream os;
    os << "(v, m) = (" << v << ", " << m << ") outside v > 0, m > 0";
    throw Error(ErrorCode::DomainError, os.str());
  }
}

// v^p m^q and its derivatives, evaluated in logs so large exponents stay finite.
Jet power_jet(double p, double q, double v, double m) {
  const double value = std::exp(p * std::log(v) + q * std::log(m));
  Jet j;
  j.value = value;
  j.gradient = {p * value / v, q * value / m};
  const double cross = p * q * value / (v * m);
  j.hessian = {p * (p - 1.0) * value / (v * v), cross, cross, q * (q - 1.0) * value / (m * m)};
  return j;
}

}  // namespace

double discriminant_root(double alpha) { return std::sqrt(4.0 - 2.0 * alpha + alpha * alpha); }

double coefficient_A(double alpha) { return 2.0 - alpha + discriminant_root(alpha); }

double coefficient_B(double alpha) { return 2.0 - alpha - discriminant_root(alpha); }

double s1_threshold(double alpha) {
  const double B = coefficient_B(alpha);
  return 2.0 * B / (B + 2.0);
}

Vec2 flux_phys(double v, double m, const ModelParams& params) {
  require_density(m);
  const double alpha = params.alpha;
  const double m_alpha = std::pow(m, alpha);
  const double kinetic = v * v / (2.0 * m_alpha);
  const double second = -v * std::pow(m, 1.0 - alpha);
  const double K = params.effective_K();
  switch (params.coupling) {
    case Coupling::none: return {kinetic, second};
    case Coupling::monotone_ff: return {kinetic - K * m_alpha, second};
    case Coupling::antimonotone: return {-kinetic - K * m_alpha, second};
  }
  return {kinetic, second};
}

Matrix2 flux_jacobian(double v, double m, const ModelParams& params) {
  require_density(m);
  const double alpha = params.alpha;
  const double m_neg_alpha = std::pow(m, -alpha);
  Matrix2 j{m_neg_alpha * v, -0.5 * alpha * std::pow(m, -1.0 - alpha) * v * v,
            -std::pow(m, 1.0 - alpha), -(1.0 - alpha) * m_neg_alpha * v};
  const double coupling_term = params.effective_K() * alpha * std::pow(m, alpha - 1.0);
  switch (params.coupling) {
    case Coupling::none: break;
    case Coupling::monotone_ff: j.a01 -= coupling_term; break;
    case Coupling::antimonotone:
      j.a00 = -j.a00;
      j.a01 = -j.a01 - coupling_term;
      break;
  }
  return j;
}

EigenPair eigenstructure(double v, double m, double alpha) {
  require_density(m);
  const double root = discriminant_root(alpha);
  const double scale = v / (2.0 * std::pow(m, alpha));
  EigenPair e;
  e.lambda1 = (alpha - root) * scale;
  e.lambda2 = (alpha + root) * scale;
  if (e.lambda1 > e.lambda2) std::swap(e.lambda1, e.lambda2);  // v < 0 reverses the order
  const Vec2 rb{(2.0 - alpha - root) * v, -2.0 * m};
  const Vec2 ra{(2.0 - alpha + root) * v, -2.0 * m};
  // r1 pairs with (alpha - root) v / (2 m^alpha) regardless of the sign of v.
  if (v >= 0.0) {
    e.r1 = rb;
    e.r2 = ra;
  } else {
    e.r1 = ra;
    e.r2 = rb;
  }
  return e;
}

NonlinearityProducts genuine_nonlinearity(double v, double m, double alpha) {
  require_density(m);
  const double root = discriminant_root(alpha);
  const double factor = v * std::pow(m, -alpha);
  return {(2.0 + alpha * alpha - root - alpha * root) * factor,
          (2.0 + alpha * alpha + root + alpha * root) * factor};
}

double theta_alpha(double alpha) { return 0.5 * (discriminant_root(alpha) + alpha - 2.0); }

double entropy_exponent_b(double alpha, double a) {
  if (a >= 0.0 && a <= 1.0) {
    throw Error(ErrorCode::InvalidA, "a = " + std::to_string(a) + " must satisfy a < 0 or a > 1");
  }
  const double radicand =
      1.0 + 4.0 * a - 4.0 * a * alpha + a * a * (4.0 - 2.0 * alpha + alpha * alpha);
  return 0.5 * (1.0 + 2.0 * a - a * alpha - std::sqrt(radicand));
}

double entropy_condition_residual(double alpha, double a, double b) {
  return alpha * a * (-a + 2.0 * b + 1.0) + 2.0 * b * (-2.0 * a + b - 1.0);
}

EntropyPair make_entropy_pair(double alpha, double a) {
  const double b = entropy_exponent_b(alpha, a);
  const double scale = std::max({std::abs(alpha * a * a), std::abs(b * b), std::abs(a * b), 1.0});
  if (std::abs(entropy_condition_residual(alpha, a, b)) > 1e-12 * scale) {
    throw Error(ErrorCode::DomainError, "entropy exponents fail the compatibility condition");
  }
  return {a, b};
}

namespace {

struct EntropyTerms {
  double vv, mm, vm;
};

EntropyTerms entropy_terms(double a, double b, double v, double m, double alpha) {
  require_region(v, m);
  const Jet eta = power_jet(a, b, v, m);
  return {alpha * v * v / (2.0 * std::pow(m, alpha + 1.0)) * eta.hessian.a00,
          -std::pow(m, 1.0 - alpha) * eta.hessian.a11,
          (2.0 - alpha) * v / std::pow(m, alpha) * eta.hessian.a01};
}

}  // namespace

double entropy_residual_pde(double a, double b, double v, double m, double alpha) {
  const auto t = entropy_terms(a, b, v, m, alpha);
  return t.vv + t.mm + t.vm;
}

double entropy_residual_relative(double a, double b, double v, double m, double alpha) {
  const auto t = entropy_terms(a, b, v, m, alpha);
  const double scale = std::abs(t.vv) + std::abs(t.mm) + std::abs(t.vm);
  const double residual = t.vv + t.mm + t.vm;
  return scale == 0.0 ? std::abs(residual) : std::abs(residual) / scale;
}

Jet entropy_eval(double a, double b, double v, double m) {
  require_region(v, m);
  return power_jet(a, b, v, m);
}

bool RiemannSpec::r_in_S1() const { return alpha > 0.0 && alpha < 2.0 && r < s1_threshold(alpha); }

RiemannSpec make_riemann_spec(double alpha, double s, double r) {
  return {alpha, s, r, coefficient_A(alpha), coefficient_B(alpha)};
}

Jet riemann_z(const RiemannSpec& spec, double v, double m) {
  require_region(v, m);
  return power_jet(spec.s / spec.A, spec.s / 2.0, v, m);
}

Jet riemann_w(const RiemannSpec& spec, double v, double m) {
  require_region(v, m);
  if (!(spec.alpha > 0.0 && spec.alpha < 2.0)) {
    throw Error(ErrorCode::DomainError, "w requires 0 < alpha < 2");
  }
  return power_jet(spec.r / spec.B, spec.r / 2.0, v, m);
}

ConvexityReport convexity_scan(ConvexKind kind, double exponent, double alpha,
                               std::size_t sample_count, std::uint64_t seed) {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_coord(-2.0, 2.0);

  const EntropyPair pair = kind == ConvexKind::entropy ? make_entropy_pair(alpha, exponent)
                                                       : EntropyPair{};
  const RiemannSpec spec = make_riemann_spec(alpha, exponent, exponent);

  ConvexityReport report;
  report.kind = kind;
  report.samples = sample_count;
  report.min_minor1 = std::numeric_limits<double>::infinity();
  report.min_minor2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sample_count; ++k) {
    const double v = std::pow(10.0, log_coord(rng));
    const double m = std::pow(10.0, log_coord(rng));
    Jet jet;
    switch (kind) {
      case ConvexKind::entropy: jet = entropy_eval(pair.a, pair.b, v, m); break;
      case ConvexKind::z: jet = riemann_z(spec, v, m); break;
      case ConvexKind::w: jet = riemann_w(spec, v, m); break;
    }
    const double scale = jet.hessian.max_abs();
    if (scale == 0.0) continue;
    const double minor1 = jet.hessian.a00 / scale;
    const double minor2 = jet.hessian.det() / (scale * scale);
    report.min_minor1 = std::min(report.min_minor1, minor1);
    report.min_minor2 = std::min(report.min_minor2, minor2);
    if ((minor1 < -kTol || minor2 < -kTol) && !report.witness) {
      report.passed = false;
      report.witness = Vec2{v, m};
    }
  }
  return report;
}

ConvexityReport convexity_check(ConvexKind kind, double exponent, double alpha,
                                std::size_t sample_count, std::uint64_t seed) {
  const bool in_region = [&] {
    switch (kind) {
      case ConvexKind::entropy: return exponent < 0.0 || exponent > 1.0;
      case ConvexKind::z: return exponent < 0.0;
      case ConvexKind::w: return alpha > 0.0 && alpha < 2.0;
    }
    return false;
  }();
  if (!in_region) {
    throw Error(ErrorCode::SpecOutOfRegion, "exponent outside the convexity family");
  }
  auto report = convexity_scan(kind, exponent, alpha, sample_count, seed);
  if (!report.passed) {
    std::ostringstream os;
    os << "Hessian not positive semidefinite at (v, m) = (" << report.witness->x << ", "
       << report.witness->y << ")";
    throw Error(ErrorCode::ConvexityViolation, os.str());
  }
  return report;
}

double density_bound_exponent(const RiemannSpec& spec) {
  if (!spec.s_in_S0() || !spec.r_in_S1()) {
    std::ostringstream os;
    os << "(s, r) = (" << spec.s << ", " << spec.r << ") requires s < 0 and r < "
       << s1_threshold(spec.alpha);
    throw Error(ErrorCode::SpecOutOfRegion, os.str());
  }
  const double A = spec.A;
  const double B = spec.B;
  return 2.0 * (A * spec.r - B * spec.s) / ((A - B) * spec.r * spec.s);
}

double density_lower_bound(double M, const RiemannSpec& spec) {
  if (!(M > 0.0)) throw Error(ErrorCode::DomainError, "M must be positive");
  return std::pow(M, density_bound_exponent(spec));
}

}  // namespace ffmfg::analysis
