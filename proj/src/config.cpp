#include "ffmfg/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "ffmfg/analysis.hpp"
#include "ffmfg/io.hpp"

namespace ffmfg::config {
namespace {

using Kind = ConfigError::Kind;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

double to_real(const std::string& key, const std::string& text) {
  const std::string s = unquote(trim(text));
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(Kind::parse, key, "key `" + key + "`: expected a number, got '" + s + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string s = unquote(trim(text));
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(Kind::parse, key, "key `" + key + "`: expected an integer, got '" + s + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ConfigError(Kind::parse, key, "key `" + key + "`: expected a list like [1, 2]");
  }
  std::vector<std::string> items;
  const std::string body = trim(std::string_view(s).substr(1, s.size() - 2));
  if (body.empty()) return items;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

ConfigError invalid(const std::string& key, const std::string& why) {
  return ConfigError(Kind::validation, key, "invalid `" + key + "`: " + why);
}

const std::set<std::string>& sweep_keys() {
  static const std::set<std::string> keys{"sweep.alpha", "sweep.epsilon", "sweep.K",
                                          "sweep.n_cells"};
  return keys;
}

}  // namespace

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::traveling_wave: return "traveling_wave";
    case InitialKind::fourier: return "fourier";
    case InitialKind::constant: return "constant";
    case InitialKind::from_value_function: return "from_value_function";
  }
  return "fourier";
}

std::size_t SweepSpec::size() const {
  const auto len = [](std::size_t n) { return std::max<std::size_t>(n, 1); };
  return len(alpha.size()) * len(epsilon.size()) * len(K.size()) * len(n_cells.size());
}

const std::vector<std::string>& accepted_keys() {
  static const std::vector<std::string> keys{
      "problem.alpha",      "problem.epsilon",          "problem.p",
      "problem.coupling",   "problem.K",                "grid.n_cells",
      "time.t_final",       "time.cfl",                 "time.max_steps",
      "solver.limiter",     "solver.m_floor",           "initial.kind",
      "initial.mean",       "initial.amplitude",        "initial.mode",
      "initial.phase",      "initial.sign",             "initial.v",
      "monitors.entropy_a", "monitors.riemann_s",       "monitors.riemann_r",
      "monitors.lp_p",      "monitors.lq_q",            "monitors.invariant_margin",
      "monitors.every",     "output.dir",               "output.snapshot_every",
      "sweep.alpha",        "sweep.epsilon",            "sweep.K",
      "sweep.n_cells"};
  return keys;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ConfigError(Kind::parse, "", where + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(Kind::parse, "", where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(Kind::parse, "", where + ": expected `key = value`");
    }
    const std::string name = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (name.empty() || value.empty()) {
      throw ConfigError(Kind::parse, "", where + ": empty key or value");
    }
    const std::string key = section.empty() ? name : section + "." + name;
    const auto& keys = accepted_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string msg = "unknown key `" + key + "` (" + where + "); accepted keys:";
      for (const auto& k : keys) msg += " " + k;
      throw ConfigError(Kind::parse, key, msg);
    }
    if (out.count(key)) throw ConfigError(Kind::parse, key, "duplicate key `" + key + "`");
    out[key] = value;
  }
  return out;
}

void validate_run_config(RunConfig& cfg) {
  try {
    cfg.params = validate_params(cfg.params);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::AlphaOutOfRange: throw invalid("problem.alpha", "must lie in (0, 2)");
      case ErrorCode::NegativeViscosity: throw invalid("problem.epsilon", "must be >= 0");
      case ErrorCode::NegativeK: throw invalid("problem.K", "must be >= 0");
      default: throw invalid("problem", e.what());
    }
  }
  if (cfg.n_cells < 8) throw invalid("grid.n_cells", "must be an integer >= 8");
  if (!(cfg.t_final > 0.0)) throw invalid("time.t_final", "must be > 0");
  try {
    cfg.solver = solver::validate_config(cfg.solver);
  } catch (const Error& e) {
    throw invalid(cfg.solver.cfl > 0.0 && cfg.solver.cfl <= 1.0 ? "solver.m_floor" : "time.cfl",
                  e.what());
  }

  auto& init = cfg.initial;
  if (init.kind == InitialKind::fourier || init.kind == InitialKind::traveling_wave) {
    try {
      init.profile = waves::validate_profile(init.profile);
    } catch (const Error& e) {
      throw invalid(init.profile.mode < 1 ? "initial.mode" : "initial.amplitude",
                    "profile must stay positive (mean - |amplitude| > 0)");
    }
  } else if (!(init.profile.mean > 0.0)) {
    throw invalid("initial.mean", "density must be positive");
  }
  if (init.sign != 1 && init.sign != -1) throw invalid("initial.sign", "must be +1 or -1");
  if (init.kind == InitialKind::traveling_wave) {
    if (cfg.params.coupling == Coupling::none || !(cfg.params.K > 0.0)) {
      throw invalid("initial.kind", "traveling_wave needs problem.coupling != none and K > 0");
    }
    if (cfg.params.coupling == Coupling::antimonotone && cfg.params.alpha != 1.0) {
      throw invalid("problem.alpha", "antimonotone traveling waves require alpha = 1");
    }
  }

  auto& mon = cfg.monitors;
  if (!mon.riemann_r_given) mon.riemann_r = 1.5 * analysis::s1_threshold(cfg.params.alpha);
  if (!(mon.riemann_s < 0.0)) throw invalid("monitors.riemann_s", "must be < 0");
  if (!(mon.riemann_r < analysis::s1_threshold(cfg.params.alpha))) {
    throw invalid("monitors.riemann_r",
                  "must be below 2B/(B+2) = " + std::to_string(analysis::s1_threshold(cfg.params.alpha)));
  }
  if (mon.entropy_a >= 0.0 && mon.entropy_a <= 1.0) {
    throw invalid("monitors.entropy_a", "must satisfy a < 0 or a > 1");
  }
  if (!(mon.lp >= 1.0)) throw invalid("monitors.lp_p", "must be >= 1");
  if (!(mon.lq >= 1.0)) throw invalid("monitors.lq_q", "must be >= 1");
  if (!(mon.invariant_margin >= 1.0)) throw invalid("monitors.invariant_margin", "must be >= 1");
  if (mon.every == 0) throw invalid("monitors.every", "must be >= 1");
  if (cfg.output.snapshot_every == 0) throw invalid("output.snapshot_every", "must be >= 1");
}

Document parse_document(const std::string& text) {
  const auto kv = parse_key_values(text);
  const auto has = [&](const std::string& k) { return kv.count(k) > 0; };
  const auto real = [&](const std::string& k, double fallback) {
    return has(k) ? to_real(k, kv.at(k)) : fallback;
  };
  const auto integer = [&](const std::string& k, long long fallback) {
    return has(k) ? to_integer(k, kv.at(k)) : fallback;
  };
  const auto text_value = [&](const std::string& k, const std::string& fallback) {
    return has(k) ? unquote(kv.at(k)) : fallback;
  };
  for (const char* required : {"problem.alpha", "grid.n_cells", "time.t_final"}) {
    if (!has(required)) throw invalid(required, "required key is missing");
  }

  Document doc;
  RunConfig& cfg = doc.run;

  const std::string kind = text_value("initial.kind", "fourier");
  if (kind == "traveling_wave") cfg.initial.kind = InitialKind::traveling_wave;
  else if (kind == "fourier") cfg.initial.kind = InitialKind::fourier;
  else if (kind == "constant") cfg.initial.kind = InitialKind::constant;
  else if (kind == "from_value_function") cfg.initial.kind = InitialKind::from_value_function;
  else throw invalid("initial.kind", "expected traveling_wave|fourier|constant|from_value_function");
  const bool wave = cfg.initial.kind == InitialKind::traveling_wave;

  cfg.params.alpha = real("problem.alpha", 1.0);
  cfg.params.epsilon = real("problem.epsilon", 0.0);
  cfg.params.p = real("problem.p", 0.0);
  try {
    cfg.params.coupling = coupling_from_string(text_value("problem.coupling", wave ? "monotone_ff" : "none"));
  } catch (const Error&) {
    throw invalid("problem.coupling", "expected none|monotone_ff|antimonotone");
  }
  cfg.params.K = real("problem.K", wave ? 1.5 : 0.0);

  const long long n = integer("grid.n_cells", 200);
  if (n < 8) throw invalid("grid.n_cells", "must be an integer >= 8");
  cfg.n_cells = static_cast<std::size_t>(n);
  cfg.t_final = real("time.t_final", 1.0);
  cfg.solver.cfl = real("time.cfl", 0.4);
  const long long max_steps = integer("time.max_steps", 50'000'000);
  if (max_steps < 1) throw invalid("time.max_steps", "must be >= 1");
  cfg.solver.max_steps = static_cast<std::size_t>(max_steps);
  try {
    cfg.solver.limiter = solver::limiter_from_string(text_value("solver.limiter", "none"));
  } catch (const Error&) {
    throw invalid("solver.limiter", "expected none|minmod|van_leer");
  }
  cfg.solver.m_floor = real("solver.m_floor", kDefaultDensityFloor);

  auto& prof = cfg.initial.profile;
  prof.kind = cfg.initial.kind == InitialKind::constant ? waves::ProfileKind::constant
                                                        : waves::ProfileKind::fourier;
  prof.mean = real("initial.mean", 1.0);
  prof.amplitude = real("initial.amplitude", 0.3);
  prof.mode = static_cast<int>(integer("initial.mode", 1));
  prof.phase = real("initial.phase", 0.0);
  cfg.initial.sign = static_cast<int>(integer("initial.sign", 1));
  cfg.initial.v_bar = real("initial.v", 1.0);

  auto& mon = cfg.monitors;
  mon.requested = std::any_of(kv.begin(), kv.end(),
                              [](const auto& e) { return e.first.rfind("monitors.", 0) == 0; });
  mon.entropy_a = real("monitors.entropy_a", 2.0);
  mon.riemann_s = real("monitors.riemann_s", -1.0);
  mon.riemann_r_given = has("monitors.riemann_r");
  mon.riemann_r = real("monitors.riemann_r", 0.0);
  mon.lp = real("monitors.lp_p", 4.0);
  mon.lq = real("monitors.lq_q", 4.0);
  mon.invariant_margin = real("monitors.invariant_margin", 1.05);
  const long long every = integer("monitors.every", 1);
  if (every < 1) throw invalid("monitors.every", "must be >= 1");
  mon.every = static_cast<std::size_t>(every);

  cfg.output.dir = text_value("output.dir", "ffmfg_out");
  const long long snap = integer("output.snapshot_every", 100);
  if (snap < 1) throw invalid("output.snapshot_every", "must be >= 1");
  cfg.output.snapshot_every = static_cast<std::size_t>(snap);

  validate_run_config(cfg);

  auto& sweep = doc.sweep;
  for (const auto& key : sweep_keys()) {
    if (!has(key)) continue;
    sweep.any_list = true;
    const auto items = split_list(key, kv.at(key));
    if (items.empty()) sweep.any_empty = true;
    for (const auto& item : items) {
      if (key == "sweep.alpha") sweep.alpha.push_back(to_real(key, item));
      if (key == "sweep.epsilon") sweep.epsilon.push_back(to_real(key, item));
      if (key == "sweep.K") sweep.K.push_back(to_real(key, item));
      if (key == "sweep.n_cells") {
        const long long cells = to_integer(key, item);
        if (cells < 8) throw invalid(key, "every entry must be >= 8");
        sweep.n_cells.push_back(static_cast<std::size_t>(cells));
      }
    }
  }
  return doc;
}

RunConfig parse_config(const std::string& text) { return parse_document(text).run; }

Document load_document(const std::string& path) {
  return parse_document(io::read_text_file(path));
}

}  // namespace ffmfg::config
