#include "fastlim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fastlim {

namespace {

using Kind = ConfigError::Kind;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(Kind::Parse, "config: key '" + std::string(key) + "' expects a number, got '" +
                                       std::string(text) + "'");
  }
  return value;
}

long long to_integer(std::string_view key, std::string_view text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(Kind::Parse, "config: key '" + std::string(key) +
                                       "' expects an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (item.empty()) throw ConfigError(Kind::Parse, "config: empty entry in list '" + std::string(key) + "'");
    out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Pair fields are collected for every family and assembled once parsing
// ends, so `pair.kind` may appear after its coefficients.
struct Staging {
  ExperimentConfig cfg;
  std::string pair_kind = "power";
  PowerPair power;
  HollingPair holling;
  SaturationPair saturation;
};

using Setter = std::function<void(Staging&, std::string_view key, std::string_view value)>;

template <typename F>
Setter real(F field) {
  return [field](Staging& st, std::string_view key, std::string_view value) {
    field(st) = to_double(key, value);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    t["params.d_R1"] = real([](Staging& s) -> double& { return s.cfg.params.d_R1; });
    t["params.d_R2"] = real([](Staging& s) -> double& { return s.cfg.params.d_R2; });
    t["params.d_S"] = real([](Staging& s) -> double& { return s.cfg.params.d_S; });
    t["params.gamma1"] = real([](Staging& s) -> double& { return s.cfg.params.gamma1; });
    t["params.gamma2"] = real([](Staging& s) -> double& { return s.cfg.params.gamma2; });
    t["params.eta1"] = real([](Staging& s) -> double& { return s.cfg.params.eta1; });
    t["params.eta2"] = real([](Staging& s) -> double& { return s.cfg.params.eta2; });
    t["params.mu"] = real([](Staging& s) -> double& { return s.cfg.params.mu; });
    t["params.rho"] = real([](Staging& s) -> double& { return s.cfg.params.rho; });
    t["params.R_hat"] = real([](Staging& s) -> double& { return s.cfg.params.R_hat; });
    t["pair.kind"] = [](Staging& s, std::string_view, std::string_view v) {
      if (v != "power" && v != "holling" && v != "saturation") {
        throw ConfigError(Kind::Parse,
                          "config: pair.kind must be power, holling or saturation, got '" +
                              std::string(v) + "'");
      }
      s.pair_kind = std::string(v);
    };
    t["pair.p"] = real([](Staging& s) -> double& { return s.power.p; });
    t["pair.q"] = real([](Staging& s) -> double& { return s.power.q; });
    t["pair.a1"] = real([](Staging& s) -> double& { return s.holling.a1; });
    t["pair.b1"] = real([](Staging& s) -> double& { return s.holling.b1; });
    t["pair.c1"] = real([](Staging& s) -> double& { return s.holling.c1; });
    t["pair.d1"] = real([](Staging& s) -> double& { return s.holling.d1; });
    t["pair.a2"] = real([](Staging& s) -> double& { return s.holling.a2; });
    t["pair.b2"] = real([](Staging& s) -> double& { return s.holling.b2; });
    t["pair.c2"] = real([](Staging& s) -> double& { return s.holling.c2; });
    t["pair.d2"] = real([](Staging& s) -> double& { return s.holling.d2; });
    t["pair.S_hat"] = real([](Staging& s) -> double& { return s.saturation.S_hat; });
    t["grid.L"] = real([](Staging& s) -> double& { return s.cfg.grid.L; });
    t["grid.n"] = [](Staging& s, std::string_view k, std::string_view v) {
      s.cfg.grid.n = static_cast<int>(to_integer(k, v));
    };
    t["time.T"] = real([](Staging& s) -> double& { return s.cfg.time.T; });
    t["time.dt"] = real([](Staging& s) -> double& { return s.cfg.time.dt; });
    t["time.snapshot_count"] = [](Staging& s, std::string_view k, std::string_view v) {
      s.cfg.time.snapshot_count = static_cast<int>(to_integer(k, v));
    };
    t["sweep.epsilons"] = [](Staging& s, std::string_view k, std::string_view v) {
      s.cfg.sweep = to_list(k, v);
    };
    t["diagnostics.p_norm"] = real([](Staging& s) -> double& { return s.cfg.diagnostics.p_norm; });
    t["diagnostics.zeta"] = real([](Staging& s) -> double& { return s.cfg.diagnostics.zeta; });
    t["diagnostics.drop_preasymptotic"] = [](Staging& s, std::string_view k, std::string_view v) {
      s.cfg.diagnostics.drop_preasymptotic = static_cast<int>(to_integer(k, v));
    };
    t["oracle.T"] = real([](Staging& s) -> double& { return s.cfg.oracle.T; });
    t["oracle.dt"] = real([](Staging& s) -> double& { return s.cfg.oracle.dt; });
    t["oracle.rk4_dt"] = real([](Staging& s) -> double& { return s.cfg.oracle.rk4_dt; });
    t["oracle.tolerance"] = real([](Staging& s) -> double& { return s.cfg.oracle.tolerance; });
    t["refine.epsilon"] = real([](Staging& s) -> double& { return s.cfg.refine.epsilon; });
    t["seed"] = [](Staging& s, std::string_view k, std::string_view v) {
      const auto value = to_integer(k, v);
      if (value < 0) throw ConfigError(Kind::Invariant, "config: seed must be >= 0");
      s.cfg.seed = static_cast<std::uint64_t>(value);
    };
    t["output_dir"] = [](Staging& s, std::string_view, std::string_view v) {
      s.cfg.output_dir = std::string(v);
    };
    return t;
  }();
  return table;
}

void apply(Staging& st, std::string_view key, std::string_view value, const std::string& where) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError(Kind::UnknownKey, where + ": unknown key '" + std::string(key) + "'");
  }
  if (value.empty()) throw ConfigError(Kind::Parse, where + ": key '" + std::string(key) + "' has no value");
  it->second(st, key, value);
}

void parse_assignment(Staging& st, std::string_view line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(Kind::Parse, where + ": expected 'key = value'");
  }
  const auto key = trim(line.substr(0, eq));
  const auto value = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(Kind::Parse, where + ": missing key");
  apply(st, key, value, where);
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  for (int k = 0; k <= 7; ++k) cfg.sweep.push_back(std::pow(10.0, -0.5 * k));
  return cfg;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(Kind::Invariant, "config: " + msg); };
  ModelParams probe = params;
  probe.epsilon = 1.0;
  try {
    probe.validate();
    validate_pair(pair);
  } catch (const DomainError& e) {
    fail(e.what());
  }
  if (!(grid.L > 0.0) || !std::isfinite(grid.L)) fail("grid.L must be positive");
  if (grid.n < 3) fail("grid.n must be >= 3");
  if (!(time.T >= 0.0) || !std::isfinite(time.T)) fail("time.T must be finite and >= 0");
  if (!(time.dt > 0.0)) fail("time.dt must be positive");
  if (time.snapshot_count < 2) fail("time.snapshot_count must be >= 2");
  if (sweep.empty()) fail("sweep.epsilons must be nonempty");
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    if (!(sweep[k] > 0.0) || !std::isfinite(sweep[k])) fail("sweep.epsilons must be positive");
    if (k > 0 && !(sweep[k] < sweep[k - 1])) fail("sweep.epsilons must be strictly decreasing");
  }
  if (!(diagnostics.p_norm >= 1.0)) fail("diagnostics.p_norm must be >= 1");
  if (!(diagnostics.zeta > 0.0)) fail("diagnostics.zeta must be positive");
  if (diagnostics.drop_preasymptotic < 0) fail("diagnostics.drop_preasymptotic must be >= 0");
  if (!(oracle.T > 0.0) || !(oracle.dt > 0.0) || !(oracle.rk4_dt > 0.0) ||
      !(oracle.tolerance > 0.0)) {
    fail("oracle settings must be positive");
  }
  if (!(refine.epsilon > 0.0)) fail("refine.epsilon must be positive");
  if (output_dir.empty()) fail("output_dir must be nonempty");
}

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  Staging st;
  st.cfg = default_config();
  if (const auto* power = std::get_if<PowerPair>(&st.cfg.pair)) st.power = *power;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    parse_assignment(st, line, "config line " + std::to_string(line_no));
  }
  for (const auto& ov : overrides) parse_assignment(st, ov, "override '" + ov + "'");

  if (st.pair_kind == "power") {
    st.cfg.pair = st.power;
  } else if (st.pair_kind == "holling") {
    st.cfg.pair = st.holling;
  } else {
    st.cfg.pair = st.saturation;
  }
  st.cfg.validate();
  return st.cfg;
}

ExperimentConfig load_config(const std::optional<std::string>& path,
                             const std::vector<std::string>& overrides) {
  if (!path) return parse_config("", overrides);
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError(Kind::Parse, "config: cannot read '" + *path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace fastlim
