#pragma once

// Key-value run configuration with TOML-style sections:
//
//   [problem]
//   alpha = 1.0
//   coupling = "monotone_ff"
//
// Dotted top-level keys (`problem.alpha = 1.0`) are accepted as well.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffmfg/core.hpp"
#include "ffmfg/solver.hpp"
#include "ffmfg/waves.hpp"

namespace ffmfg::config {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { parse, validation };

  ConfigError(Kind kind, std::string key, const std::string& what)
      : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

enum class InitialKind { traveling_wave, fourier, constant, from_value_function };

std::string_view to_string(InitialKind kind);

struct InitialSpec {
  InitialKind kind = InitialKind::fourier;
  waves::ProfileSpec profile;
  int sign = 1;
  double v_bar = 1.0;  // constant states only
};

struct MonitorSettings {
  double entropy_a = 2.0;
  double riemann_s = -1.0;
  double riemann_r = 0.0;  // resolved to 1.5 * 2B/(B+2) when not given
  double lp = 4.0;
  double lq = 4.0;
  double invariant_margin = 1.05;  // M = margin * initial max(z, w)
  std::size_t every = 1;
  bool requested = false;  // any monitors.* key present
  bool riemann_r_given = false;
};

struct OutputSettings {
  std::string dir = "ffmfg_out";
  std::size_t snapshot_every = 100;
};

struct RunConfig {
  ModelParams params;
  std::size_t n_cells = 200;
  double t_final = 1.0;
  solver::SolverConfig solver;
  InitialSpec initial;
  MonitorSettings monitors;
  OutputSettings output;
};

/// Cartesian sweep lists; an absent list keeps the base value.
struct SweepSpec {
  std::vector<double> alpha;
  std::vector<double> epsilon;
  std::vector<double> K;
  std::vector<std::size_t> n_cells;
  bool any_list = false;
  bool any_empty = false;

  std::size_t size() const;
};

struct Document {
  RunConfig run;
  SweepSpec sweep;
};

/// Every key the parser accepts, in documentation order.
const std::vector<std::string>& accepted_keys();

/// Raw key -> value text after section flattening; throws ConfigError(parse).
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Parses and validates; throws ConfigError naming the offending key.
Document parse_document(const std::string& text);
RunConfig parse_config(const std::string& text);

/// Re-validates a run config, e.g. after a sweep substituted values.
void validate_run_config(RunConfig& config);

Document load_document(const std::string& path);

}  // namespace ffmfg::config
