#include "ffmfg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ffmfg::oracle {

FDResult fd_derivatives(const ScalarField& f, Vec2 point, const FDConfig& cfg) {
  if (!(cfg.h > 0.0) || !(cfg.hessian_h > 0.0)) {
    throw Error(ErrorCode::DomainError, "finite-difference steps must be positive");
  }
  const auto step = [&](double h, double x) {
    return cfg.relative_scale && x != 0.0 ? h * std::abs(x) : h;
  };
  const double v = point.x;
  const double m = point.y;
  const double gv = step(cfg.h, v);
  const double gm = step(cfg.h, m);
  const double hv = step(cfg.hessian_h, v);
  const double hm = step(cfg.hessian_h, m);
  if (v - std::max(gv, hv) <= 0.0 || m - std::max(gm, hm) <= 0.0) {
    std::ostringstream os;
    os << "stencil around (" << v << ", " << m << ") leaves v > 0, m > 0";
    throw Error(ErrorCode::DomainError, os.str());
  }

  FDResult out;
  out.gradient = {(f(v + gv, m) - f(v - gv, m)) / (2.0 * gv),
                  (f(v, m + gm) - f(v, m - gm)) / (2.0 * gm)};
  // Second differences at steps H and H/2, combined to cancel the H^2 error term.
  const double f0 = f(v, m);
  const auto second = [&](double sv, double sm) {
    const double cross =
        (f(v + sv, m + sm) - f(v + sv, m - sm) - f(v - sv, m + sm) + f(v - sv, m - sm)) /
        (4.0 * sv * sm);
    return Matrix2{(f(v + sv, m) - 2.0 * f0 + f(v - sv, m)) / (sv * sv), cross, cross,
                   (f(v, m + sm) - 2.0 * f0 + f(v, m - sm)) / (sm * sm)};
  };
  const Matrix2 coarse = second(hv, hm);
  const Matrix2 fine = second(0.5 * hv, 0.5 * hm);
  const auto extrapolate = [](double c, double f) { return (4.0 * f - c) / 3.0; };
  out.hessian = {extrapolate(coarse.a00, fine.a00), extrapolate(coarse.a01, fine.a01),
                 extrapolate(coarse.a10, fine.a10), extrapolate(coarse.a11, fine.a11)};
  return out;
}

namespace {

Vec2 eigenvector_for(const Matrix2& a, double lambda) {
  const Vec2 c1{a.a01, lambda - a.a00};
  const Vec2 c2{lambda - a.a11, a.a10};
  return norm(c1) >= norm(c2) ? c1 : c2;
}

}  // namespace

Eigen2 eig2_numeric(const Matrix2& mat) {
  Eigen2 e;
  const double half_trace = 0.5 * mat.trace();
  const double half_gap = 0.5 * (mat.a00 - mat.a11);
  const double disc = half_gap * half_gap + mat.a01 * mat.a10;
  if (disc < 0.0) {
    e.complex = true;
    e.lambda1 = e.lambda2 = half_trace;
    e.imag = std::sqrt(-disc);
    return e;
  }
  const double root = std::sqrt(disc);
  // Larger-magnitude root first, then the product rule for the other.
  const double big = half_trace >= 0.0 ? half_trace + root : half_trace - root;
  const double det = mat.det();
  const double small = big != 0.0 ? det / big : 0.0;
  e.lambda1 = std::min(big, small);
  e.lambda2 = std::max(big, small);

  e.r1 = eigenvector_for(mat, e.lambda1);
  e.r2 = eigenvector_for(mat, e.lambda2);
  if (norm(e.r1) == 0.0 && norm(e.r2) == 0.0) {
    // Scalar multiple of the identity: every vector is an eigenvector.
    e.r1 = {1.0, 0.0};
    e.r2 = {0.0, 1.0};
  }
  return e;
}

double spectral_radius(const Eigen2& eig, const Matrix2& mat) {
  if (eig.complex) return std::abs(mat.trace()) / 2.0 + std::sqrt(std::abs(mat.det()));
  return std::max(std::abs(eig.lambda1), std::abs(eig.lambda2));
}

Vec2 level_set_solve(double M, const analysis::RiemannSpec& spec) {
  if (!(M > 0.0)) throw Error(ErrorCode::DomainError, "M must be positive");
  if (spec.s * spec.r * (spec.A - spec.B) == 0.0) {
    throw Error(ErrorCode::SingularSystem, "level sets of z and w are parallel");
  }
  // (s/A) X + (s/2) Y = ln M
  // (r/B) X + (r/2) Y = ln M,   X = ln v, Y = ln m
  const double L = std::log(M);
  const double a11 = spec.s / spec.A;
  const double a12 = spec.s / 2.0;
  const double a21 = spec.r / spec.B;
  const double a22 = spec.r / 2.0;
  const double det = a11 * a22 - a12 * a21;
  if (det == 0.0) throw Error(ErrorCode::SingularSystem, "level-set system is singular");
  const double X = (L * a22 - a12 * L) / det;
  const double Y = (a11 * L - L * a21) / det;
  return {std::exp(X), std::exp(Y)};
}

}  // namespace ffmfg::oracle
