#include "fso/error.hpp"
#include "fso/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fso {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

namespace pt = boost::property_tree;

// The cap is quoted to three decimals; compare at that precision.
bool above_sigma_cap(double sigma) { return std::round(sigma * 1000.0) / 1000.0 > kLogNormalSigmaCap; }

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"weather",
       {"preset", "wavelength_nm", "link_distance_m", "attenuation_db_per_km", "cn2", "tx_aperture_m",
        "rx_aperture_m", "divergence_mrad", "fov_mrad"}},
      {"topology", {"hops", "n_tx", "rho", "tx_separation_m", "hop_lengths_m", "composition"}},
      {"modulation", {"scheme", "order"}},
      {"sweep",
       {"start_db", "stop_db", "step_db", "quadrature_order", "miso_quadrature_order", "target_ber",
        "bracket_low_db", "bracket_high_db"}},
      {"mc", {"enabled", "samples", "seed", "kernel", "target_relative_error"}},
      {"output", {"path", "plot_dir"}},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Typed accessors. Each records a violation instead of throwing so that one
// pass reports everything.
class Reader {
public:
  Reader(const pt::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

  std::optional<std::string> raw(const std::string& path) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::optional<double> real(const std::string& path) {
    auto text = raw(path);
    if (!text) return std::nullopt;
    double value = 0.0;
    const char* end = text->data() + text->size();
    auto [ptr, ec] = std::from_chars(text->data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      errors_.push_back(path + ": expected a real number, got '" + *text + "'");
      return std::nullopt;
    }
    return value;
  }

  std::optional<long long> integer(const std::string& path) {
    auto text = raw(path);
    if (!text) return std::nullopt;
    long long value = 0;
    const char* end = text->data() + text->size();
    auto [ptr, ec] = std::from_chars(text->data(), end, value);
    if (ec != std::errc{} || ptr != end) {
      errors_.push_back(path + ": expected an integer, got '" + *text + "'");
      return std::nullopt;
    }
    return value;
  }

  std::optional<bool> boolean(const std::string& path) {
    auto text = raw(path);
    if (!text) return std::nullopt;
    if (*text == "true") return true;
    if (*text == "false") return false;
    errors_.push_back(path + ": expected true or false, got '" + *text + "'");
    return std::nullopt;
  }

  std::optional<std::vector<double>> reals(const std::string& path) {
    auto text = raw(path);
    if (!text) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double value = 0.0;
      const char* end = item.data() + item.size();
      auto [ptr, ec] = std::from_chars(item.data(), end, value);
      if (item.empty() || ec != std::errc{} || ptr != end) {
        errors_.push_back(path + ": expected a comma-separated list of reals, got '" + *text + "'");
        return std::nullopt;
      }
      out.push_back(value);
    }
    return out;
  }

  template <typename Parse>
  auto enumerated(const std::string& path, Parse parse) -> std::optional<decltype(parse(""))> {
    auto text = raw(path);
    if (!text) return std::nullopt;
    try {
      return parse(*text);
    } catch (const DomainError& e) {
      errors_.push_back(path + ": " + e.what());
      return std::nullopt;
    }
  }

private:
  const pt::ptree& tree_;
  std::vector<std::string>& errors_;
};

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

double ScenarioConfig::effective_rho() const {
  if (rho) return *rho;
  const double hop = hop_lengths_m.empty() ? link.link_distance_m / hops : hop_lengths_m.front();
  return correlation_coefficient(link, hop);
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"weather.preset", preset},
      {"weather.wavelength_nm", num(link.wavelength_m * 1e9)},
      {"weather.link_distance_m", num(link.link_distance_m)},
      {"weather.attenuation_db_per_km", num(link.attenuation_db_per_km)},
      {"weather.cn2", num(link.cn2)},
      {"weather.tx_aperture_m", num(link.tx_aperture_m)},
      {"weather.rx_aperture_m", num(link.rx_aperture_m)},
      {"weather.divergence_mrad", num(link.divergence_rad * 1e3)},
  };
  if (fov_mrad) out.emplace_back("weather.fov_mrad", num(*fov_mrad));
  out.emplace_back("topology.hops", std::to_string(hops));
  out.emplace_back("topology.n_tx", std::to_string(n_tx));
  if (rho) out.emplace_back("topology.rho", num(*rho));
  if (link.tx_separation_m > 0.0) out.emplace_back("topology.tx_separation_m", num(link.tx_separation_m));
  if (!hop_lengths_m.empty()) {
    std::string list;
    for (std::size_t i = 0; i < hop_lengths_m.size(); ++i) {
      list += (i ? "," : "") + num(hop_lengths_m[i]);
    }
    out.emplace_back("topology.hop_lengths_m", list);
  }
  out.emplace_back("topology.composition", std::string(to_string(composition)));
  out.emplace_back("modulation.scheme", std::string(to_string(modulation.scheme())));
  out.emplace_back("modulation.order", std::to_string(modulation.order()));
  out.emplace_back("sweep.start_db", num(sweep.start_db));
  out.emplace_back("sweep.stop_db", num(sweep.stop_db));
  out.emplace_back("sweep.step_db", num(sweep.step_db));
  out.emplace_back("sweep.quadrature_order", std::to_string(quadrature.siso));
  out.emplace_back("sweep.miso_quadrature_order", std::to_string(quadrature.miso));
  out.emplace_back("sweep.target_ber", num(target_ber));
  out.emplace_back("sweep.bracket_low_db", num(bracket_low_db));
  out.emplace_back("sweep.bracket_high_db", num(bracket_high_db));
  out.emplace_back("mc.enabled", mc.enabled ? "true" : "false");
  if (mc.enabled) {
    out.emplace_back("mc.samples", std::to_string(mc.samples));
    out.emplace_back("mc.seed", std::to_string(mc.seed));
    out.emplace_back("mc.kernel", std::string(to_string(mc.kernel)));
    if (mc.target_relative_error) out.emplace_back("mc.target_relative_error", num(*mc.target_relative_error));
  }
  return out;
}

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({std::string("syntax: ") + e.what()});
  }

  std::vector<std::string> errors;
  for (const auto& [section, body] : tree) {
    auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      if (body.empty()) {
        errors.push_back("key '" + section + "' must live inside a section");
      } else {
        errors.push_back("unknown section [" + section + "]");
      }
      continue;
    }
    for (const auto& [key, value] : body) {
      if (!known->second.contains(key)) errors.push_back("unknown key " + section + "." + key);
    }
  }

  Reader r(tree, errors);
  ScenarioConfig cfg;

  if (auto preset = r.raw("weather.preset")) {
    if (*preset == "clear") {
      cfg.link = LinkScenario::clear_weather();
    } else if (*preset == "light_fog") {
      cfg.link = LinkScenario::light_fog();
    } else if (*preset != "custom") {
      errors.push_back("weather.preset: expected clear, light_fog or custom, got '" + *preset + "'");
    }
    cfg.preset = *preset;
  }
  if (auto v = r.real("weather.wavelength_nm")) cfg.link.wavelength_m = *v * 1e-9;
  if (auto v = r.real("weather.link_distance_m")) cfg.link.link_distance_m = *v;
  if (auto v = r.real("weather.attenuation_db_per_km")) cfg.link.attenuation_db_per_km = *v;
  if (auto v = r.real("weather.cn2")) cfg.link.cn2 = *v;
  if (auto v = r.real("weather.tx_aperture_m")) cfg.link.tx_aperture_m = *v;
  if (auto v = r.real("weather.rx_aperture_m")) cfg.link.rx_aperture_m = *v;
  if (auto v = r.real("weather.divergence_mrad")) cfg.link.divergence_rad = *v * 1e-3;
  cfg.fov_mrad = r.real("weather.fov_mrad");

  if (auto v = r.integer("topology.hops")) cfg.hops = static_cast<int>(*v);
  if (auto v = r.integer("topology.n_tx")) cfg.n_tx = static_cast<int>(*v);
  auto sep = r.real("topology.tx_separation_m");
  if (sep) cfg.link.tx_separation_m = *sep;
  if (auto v = r.real("topology.rho")) {
    cfg.rho = *v;
  } else if (sep) {
    cfg.rho.reset();
  }
  if (auto v = r.reals("topology.hop_lengths_m")) cfg.hop_lengths_m = *v;
  if (auto v = r.enumerated("topology.composition", parse_composition)) cfg.composition = *v;

  auto scheme = r.enumerated("modulation.scheme", parse_scheme);
  auto order = r.integer("modulation.order");
  if (scheme || order) {
    const Scheme s = scheme.value_or(Scheme::ook);
    const long long m = order.value_or(2);
    try {
      cfg.modulation = ModulationSpec(s, static_cast<int>(m));
    } catch (const DomainError& e) {
      errors.push_back(std::string("modulation: ") + e.what());
    }
  }

  if (auto v = r.real("sweep.start_db")) cfg.sweep.start_db = *v;
  if (auto v = r.real("sweep.stop_db")) cfg.sweep.stop_db = *v;
  if (auto v = r.real("sweep.step_db")) cfg.sweep.step_db = *v;
  if (auto v = r.integer("sweep.quadrature_order")) {
    cfg.quadrature.siso = static_cast<int>(*v);
    cfg.quadrature.miso = static_cast<int>(*v);
  }
  if (auto v = r.integer("sweep.miso_quadrature_order")) cfg.quadrature.miso = static_cast<int>(*v);
  if (auto v = r.real("sweep.target_ber")) cfg.target_ber = *v;
  if (auto v = r.real("sweep.bracket_low_db")) cfg.bracket_low_db = *v;
  if (auto v = r.real("sweep.bracket_high_db")) cfg.bracket_high_db = *v;

  if (auto v = r.boolean("mc.enabled")) cfg.mc.enabled = *v;
  if (auto v = r.integer("mc.samples")) {
    if (*v < 0) errors.push_back("mc.samples: must be non-negative");
    else cfg.mc.samples = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.integer("mc.seed")) cfg.mc.seed = static_cast<std::uint64_t>(*v);
  if (auto v = r.enumerated("mc.kernel", parse_qmode)) cfg.mc.kernel = *v;
  cfg.mc.target_relative_error = r.real("mc.target_relative_error");

  if (auto v = r.raw("output.path")) cfg.output_path = *v;
  if (auto v = r.raw("output.plot_dir")) cfg.plot_dir = *v;

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  return parse_config(in);
}

std::vector<Finding> validate_config(const ScenarioConfig& c) {
  std::vector<Finding> out;
  auto error = [&](std::string key, std::string msg) {
    out.push_back({Severity::error, std::move(key), std::move(msg)});
  };
  auto warn = [&](std::string key, std::string msg) {
    out.push_back({Severity::warning, std::move(key), std::move(msg)});
  };

  try {
    c.link.validate();
  } catch (const DomainError& e) {
    error("weather", e.what());
  }
  if (c.fov_mrad && !(*c.fov_mrad > 0.0)) error("weather.fov_mrad", "must be > 0");

  if (c.hops < 1) error("topology.hops", "must be >= 1");
  if (c.n_tx < 1) error("topology.n_tx", "must be >= 1");
  if (c.rho && !(*c.rho >= 0.0 && *c.rho <= 1.0)) error("topology.rho", "must lie in [0, 1]");
  if (c.rho && c.link.tx_separation_m > 0.0) {
    warn("topology.rho", "both rho and tx_separation_m given; rho takes precedence");
  }
  if (!c.hop_lengths_m.empty()) {
    if (static_cast<int>(c.hop_lengths_m.size()) != c.hops) {
      error("topology.hop_lengths_m", "needs exactly one length per hop");
    }
    double total = 0.0;
    bool positive = true;
    for (double h : c.hop_lengths_m) {
      positive = positive && h > 0.0;
      total += h;
    }
    if (!positive) error("topology.hop_lengths_m", "every hop length must be > 0");
    if (positive && std::abs(total - c.link.link_distance_m) > 1e-9 * c.link.link_distance_m) {
      warn("topology.hop_lengths_m",
           fmt::format("hop lengths sum to {} m, link distance is {} m", total, c.link.link_distance_m));
    }
  }

  if (!(c.sweep.step_db > 0.0)) error("sweep.step_db", "must be > 0");
  if (!(c.sweep.start_db < c.sweep.stop_db)) error("sweep.start_db", "must be < sweep.stop_db");
  if (!(c.bracket_low_db < c.bracket_high_db)) error("sweep.bracket_low_db", "must be < sweep.bracket_high_db");
  if (!(c.target_ber > 0.0 && c.target_ber <= 0.5)) error("sweep.target_ber", "must lie in (0, 0.5]");
  for (auto [key, order] : {std::pair{"sweep.quadrature_order", c.quadrature.siso},
                            std::pair{"sweep.miso_quadrature_order", c.quadrature.miso}}) {
    if (order < 1 || order > kMaxQuadratureOrder) error(key, "must lie in [1, 64]");
  }
  if (c.n_tx >= 1 && c.quadrature.miso >= 1 && c.quadrature.miso <= kMaxQuadratureOrder && c.n_tx > 1) {
    const int used = miso_quadrature_order(c.quadrature.miso, c.n_tx);
    if (std::pow(static_cast<double>(used), c.n_tx) > static_cast<double>(kMaxTensorPoints)) {
      error("topology.n_tx", fmt::format("tensor rule of order {} over {} transmitters exceeds {} points",
                                         used, c.n_tx, kMaxTensorPoints));
    }
  }
  if (c.mc.enabled && c.mc.samples < kMinSemiAnalyticSamples) error("mc.samples", "must be >= 10000");
  if (c.mc.target_relative_error && !(*c.mc.target_relative_error > 0.0)) {
    error("mc.target_relative_error", "must be > 0");
  }

  const bool link_ok = std::none_of(out.begin(), out.end(), [](const Finding& f) {
    return f.severity == Severity::error && (f.key == "weather" || f.key.starts_with("topology"));
  });
  if (link_ok) {
    const double direct_sigma = std::sqrt(rytov_variance(c.link, c.link.link_distance_m));
    if (above_sigma_cap(direct_sigma)) {
      warn("weather.cn2", fmt::format("direct-link sigma_x = {:.4f} exceeds the log-normal validity cap "
                                      "sigma_x <= 0.374",
                                      direct_sigma));
    }
    const double hop = c.hop_lengths_m.empty() ? c.link.link_distance_m / c.hops
                                               : *std::max_element(c.hop_lengths_m.begin(), c.hop_lengths_m.end());
    const double hop_sigma = std::sqrt(rytov_variance(c.link, hop));
    if (c.hops > 1 && above_sigma_cap(hop_sigma)) {
      warn("topology.hops", fmt::format("per-hop sigma_x = {:.4f} exceeds the log-normal validity cap "
                                        "sigma_x <= 0.374",
                                        hop_sigma));
    }
    if (c.fov_mrad && c.n_tx > 1) {
      const double spread = (c.n_tx - 1) * c.link.tx_separation_m;
      const double limit = *c.fov_mrad * 1e-3 * c.link.link_distance_m;
      if (spread > limit) {
        warn("weather.fov_mrad", fmt::format("transmitter spread {} m exceeds receiver FOV footprint {} m",
                                             spread, limit));
      }
    }
  }

  if (c.modulation.bits_per_symbol() != c.hops && c.hops >= 1) {
    warn("modulation.order",
         fmt::format("{} carries {} bit(s)/symbol over {} hop(s); equal spectral efficiency needs {}-ary "
                     "signalling",
                     c.modulation.describe(), c.modulation.bits_per_symbol(), c.hops, 1 << std::min(c.hops, 30)));
  }
  if (c.modulation.substituted_formula()) {
    warn("modulation.scheme", "M-PAM uses the standard IM/DD Gray-coded BEP as a substituted formula");
  }
  return out;
}

void require_valid(const ScenarioConfig& config) {
  std::vector<std::string> violations;
  for (const Finding& f : validate_config(config)) {
    if (f.severity == Severity::error) violations.push_back(f.key + ": " + f.message);
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

}  // namespace fso
