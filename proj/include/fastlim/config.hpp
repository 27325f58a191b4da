#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fastlim/model.hpp"

namespace fastlim {

/// Configuration problem. Kind distinguishes a malformed line, an unknown
/// key and a value that breaks an invariant.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Parse, UnknownKey, Invariant };

  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct GridConfig {
  double L = 1.0;
  int n = 256;
};

struct TimeConfig {
  double T = 5.0;
  double dt = 1e-3;
  int snapshot_count = 101;
};

struct DiagnosticsConfig {
  double p_norm = 2.0;
  double zeta = 1.0;
  int drop_preasymptotic = 1;
};

struct OracleConfig {
  double T = 1.0;
  /// Solver step of the homogeneous oracle runs.
  double dt = 1e-5;
  double rk4_dt = 1e-6;
  double tolerance = 1e-4;
};

struct RefineConfig {
  double epsilon = 1e-2;
};

struct ExperimentConfig {
  ModelParams params;  // epsilon is overwritten per sweep point
  TransitionPair pair = PowerPair{1.0, -1.0};
  GridConfig grid;
  TimeConfig time;
  std::vector<double> sweep;
  DiagnosticsConfig diagnostics;
  OracleConfig oracle;
  RefineConfig refine;
  std::uint64_t seed = 12345;
  std::string output_dir = "fastlim_out";

  /// Throws ConfigError(Kind::Invariant) on any violated invariant.
  void validate() const;
};

/// Table-1 parameters, Power{1,-1}, n = 256, T = 5, dt = 1e-3, 101 snapshots,
/// epsilon = 10^(-k/2) for k = 0..7.
ExperimentConfig default_config();

/// Parses `key = value` lines (dotted keys, `#` comments) on top of the
/// defaults, then applies `key=value` overrides, then validates.
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Same as parse_config on the file contents; no path means defaults.
ExperimentConfig load_config(const std::optional<std::string>& path,
                             const std::vector<std::string>& overrides = {});

/// Every key accepted by the config format.
std::vector<std::string> config_keys();

}  // namespace fastlim
