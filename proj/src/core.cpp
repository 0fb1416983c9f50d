#include "ffmfg/core.hpp"

#include <algorithm>

namespace ffmfg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NegativeViscosity: return "NegativeViscosity";
    case ErrorCode::NegativeK: return "NegativeK";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::NonPositiveV: return "NonPositiveV";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidA: return "InvalidA";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConvexityViolation: return "ConvexityViolation";
    case ErrorCode::SpecOutOfRegion: return "SpecOutOfRegion";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::AlphaMismatch: return "AlphaMismatch";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

double Matrix2::max_abs() const {
  return std::max({std::abs(a00), std::abs(a01), std::abs(a10), std::abs(a11)});
}

std::string_view to_string(Coupling c) {
  switch (c) {
    case Coupling::none: return "none";
    case Coupling::monotone_ff: return "monotone_ff";
    case Coupling::antimonotone: return "antimonotone";
  }
  return "none";
}

Coupling coupling_from_string(std::string_view name) {
  if (name == "none") return Coupling::none;
  if (name == "monotone_ff") return Coupling::monotone_ff;
  if (name == "antimonotone") return Coupling::antimonotone;
  throw Error(ErrorCode::InvalidConfig,
              "unknown coupling '" + std::string(name) + "' (expected none|monotone_ff|antimonotone)");
}

ModelParams validate_params(const ModelParams& raw) {
  if (!std::isfinite(raw.alpha) || !std::isfinite(raw.epsilon) || !std::isfinite(raw.p) ||
      !std::isfinite(raw.K)) {
    throw Error(ErrorCode::NonFinite, "model parameters must be finite");
  }
  if (!(raw.alpha > 0.0 && raw.alpha < 2.0)) {
    throw Error(ErrorCode::AlphaOutOfRange,
                "alpha = " + std::to_string(raw.alpha) + " outside (0, 2)");
  }
  if (raw.epsilon < 0.0) {
    throw Error(ErrorCode::NegativeViscosity, "epsilon = " + std::to_string(raw.epsilon));
  }
  ModelParams out = raw;
  if (out.coupling == Coupling::none) {
    out.K = 0.0;
  } else if (raw.K < 0.0) {
    throw Error(ErrorCode::NegativeK, "K = " + std::to_string(raw.K));
  }
  return out;
}

Grid1D::Grid1D(std::size_t n_cells) : n_(n_cells), dx_(0.0) {
  if (n_cells < 8) {
    throw Error(ErrorCode::InvalidGrid, "n_cells = " + std::to_string(n_cells) + " < 8");
  }
  dx_ = 1.0 / static_cast<double>(n_cells);
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = center(i);
  return x;
}

State validate_state(const Grid1D& grid, const State& candidate, bool require_positive_v) {
  const auto n = grid.n_cells();
  if (candidate.v.size() != n || candidate.m.size() != n) {
    throw Error(ErrorCode::InvalidGrid, "field length does not match n_cells = " + std::to_string(n));
  }
  if (!std::isfinite(candidate.t)) throw Error(ErrorCode::NonFinite, "time is not finite");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(candidate.v[i]) || !std::isfinite(candidate.m[i])) {
      throw Error(ErrorCode::NonFinite, "non-finite value at cell " + std::to_string(i));
    }
    if (candidate.m[i] <= 0.0) {
      throw Error(ErrorCode::NonPositiveDensity, "m <= 0 at cell " + std::to_string(i));
    }
    if (require_positive_v && candidate.v[i] <= 0.0) {
      throw Error(ErrorCode::NonPositiveV, "v <= 0 at cell " + std::to_string(i));
    }
  }
  return candidate;
}

State validate_state(const Grid1D& grid, std::vector<double> v, std::vector<double> m,
                     bool require_positive_v, double t) {
  State s{t, std::move(v), std::move(m)};
  return validate_state(grid, s, require_positive_v);
}

}  // namespace ffmfg
