#pragma once

// Batch surface: scenario configuration, validation, SNR sweeps, target-SNR
// search and gain comparison.

#include "fso/ber_engine.hpp"
#include "fso/channel.hpp"
#include "fso/modulation.hpp"
#include "fso/montecarlo.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fso {

inline constexpr double kLogNormalSigmaCap = 0.374;

struct SweepRange {
  double start_db = 0.0;
  double stop_db = 80.0;
  double step_db = 1.0;
};

struct McSettings {
  bool enabled = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  QMode kernel = QMode::exact;
  std::optional<double> target_relative_error;
};

struct ScenarioConfig {
  std::string preset = "clear";  ///< "clear", "light_fog" or "custom"
  LinkScenario link = LinkScenario::clear_weather();
  std::optional<double> fov_mrad;

  int hops = 1;
  int n_tx = 1;
  std::optional<double> rho = 0.3;      ///< takes precedence over link.tx_separation_m
  std::vector<double> hop_lengths_m;    ///< empty: equidistant l/K
  Composition composition = Composition::identical_approx;

  ModulationSpec modulation = ModulationSpec::ook();

  SweepRange sweep;
  QuadratureOrders quadrature;
  double target_ber = 1e-9;
  double bracket_low_db = -100.0;
  double bracket_high_db = 150.0;

  McSettings mc;

  std::string output_path;  ///< empty or "-" means stdout
  std::string plot_dir;     ///< empty: no companion series files

  /// Correlation actually used for MISO hops.
  double effective_rho() const;
  /// Canonical key = value dump, one line per key, sections as prefixes.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses the sectioned key-value config. Unknown sections/keys, malformed
/// values and invariant violations are collected and thrown as one ConfigError.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

enum class Severity { warning, error };

struct Finding {
  Severity severity;
  std::string key;
  std::string message;
};

std::vector<Finding> validate_config(const ScenarioConfig& config);

/// Throws ConfigError listing every error-severity finding.
void require_valid(const ScenarioConfig& config);

Topology build_topology(const ScenarioConfig& config);

struct SweepResult {
  std::vector<BerPoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

SweepResult run_sweep(const ScenarioConfig& config);

/// Smallest SNR (dB) inside [bracket_low, bracket_high] where the closed-form
/// BER reaches `target`, found by bisection to well under 0.01 dB.
double snr_at_target_ber(const ScenarioConfig& config, double target);

/// snr_at_target_ber(a) - snr_at_target_ber(b): positive when b needs less SNR.
double compare_gain(const ScenarioConfig& a, const ScenarioConfig& b, double target);

// CSV dialect: '#'-prefixed "key = value" metadata lines, then the header
// snr_db,ber_closed,ber_mc,mc_halfwidth_95 and one row per point; empty
// fields for absent MC columns.
void write_csv(std::ostream& out, const SweepResult& result);
SweepResult read_csv(std::istream& in);

/// Companion (x, y) series file in the same dialect.
void write_series(std::ostream& out, const std::string& label,
                  const std::vector<std::pair<double, double>>& xy);

std::string tool_version();

}  // namespace fso
