#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffmfg {

enum class ErrorCode {
  AlphaOutOfRange,
  NegativeViscosity,
  NegativeK,
  NonPositiveDensity,
  NonPositiveV,
  NonFinite,
  InvalidGrid,
  InvalidA,
  DomainError,
  ConvexityViolation,
  SpecOutOfRegion,
  SingularSystem,
  AlphaMismatch,
  NonPositiveProfile,
  InsufficientSnapshots,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every library failure goes through it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix [[a00, a01], [a10, a11]].
struct Matrix2 {
  double a00 = 0.0;
  double a01 = 0.0;
  double a10 = 0.0;
  double a11 = 0.0;

  double trace() const { return a00 + a11; }
  double det() const { return a00 * a11 - a01 * a10; }
  Matrix2 transpose() const { return {a00, a10, a01, a11}; }
  Vec2 operator*(Vec2 u) const { return {a00 * u.x + a01 * u.y, a10 * u.x + a11 * u.y}; }
  double max_abs() const;
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// u^T H u
inline double quadratic_form(const Matrix2& h, Vec2 u) { return dot(u, h * u); }

enum class Coupling { none, monotone_ff, antimonotone };

std::string_view to_string(Coupling c);
Coupling coupling_from_string(std::string_view name);

struct ModelParams {
  double alpha = 1.0;
  double epsilon = 0.0;
  double p = 0.0;
  Coupling coupling = Coupling::none;
  double K = 0.0;

  /// Coupling strength actually used by the flux (0 when uncoupled).
  double effective_K() const { return coupling == Coupling::none ? 0.0 : K; }
};

ModelParams validate_params(const ModelParams& raw);

/// Periodic cell-centered grid on [0, 1).
class Grid1D {
 public:
  explicit Grid1D(std::size_t n_cells);

  std::size_t n_cells() const { return n_; }
  double dx() const { return dx_; }
  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
  std::vector<double> centers() const;

  /// Wraps any signed index onto [0, n_cells).
  std::size_t wrap(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    return static_cast<std::size_t>(((i % n) + n) % n);
  }
  std::size_t neighbor(std::size_t i, std::ptrdiff_t offset) const {
    return wrap(static_cast<std::ptrdiff_t>(i) + offset);
  }

 private:
  std::size_t n_;
  double dx_;
};

struct State {
  double t = 0.0;
  std::vector<double> v;
  std::vector<double> m;
};

State validate_state(const Grid1D& grid, const State& candidate, bool require_positive_v = false);
State validate_state(const Grid1D& grid, std::vector<double> v, std::vector<double> m,
                     bool require_positive_v = false, double t = 0.0);

/// Default density threshold below which a run is declared blown up.
inline constexpr double kDefaultDensityFloor = 1e-10;

}  // namespace ffmfg
