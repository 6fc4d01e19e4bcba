#include "fso/modulation.hpp"

#include "fso/error.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace fso {

namespace {

bool is_power_of_two(int m) { return m >= 2 && std::has_single_bit(static_cast<unsigned>(m)); }

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ook: return "ook";
    case Scheme::pam: return "pam";
    case Scheme::qam: return "qam";
    case Scheme::qam_squared: return "qam_squared";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "ook") return Scheme::ook;
  if (text == "pam") return Scheme::pam;
  if (text == "qam") return Scheme::qam;
  if (text == "qam_squared") return Scheme::qam_squared;
  throw DomainError("unknown modulation scheme '" + std::string(text) + "'");
}

std::string_view to_string(QMode mode) { return mode == QMode::exact ? "exact" : "chiani"; }

QMode parse_qmode(std::string_view text) {
  if (text == "exact") return QMode::exact;
  if (text == "chiani") return QMode::chiani;
  throw DomainError("unknown Q-function mode '" + std::string(text) + "'");
}

ModulationSpec::ModulationSpec(Scheme scheme, int order) : scheme_(scheme), order_(order) {
  if (scheme == Scheme::ook && order != 2) throw DomainError("OOK requires M = 2");
  if (!is_power_of_two(order)) throw DomainError("constellation order must be a power of two >= 2");
  const double m = order;
  log2m_ = std::log2(m);
  switch (scheme) {
    case Scheme::ook:
      prefactor_ = 1.0;
      snr_coeff_ = 0.5;
      break;
    case Scheme::qam:
      prefactor_ = 2.0 * (1.0 - 1.0 / std::sqrt(m)) / log2m_;
      snr_coeff_ = 3.0 * log2m_ / (2.0 * (m - 1.0));
      break;
    case Scheme::qam_squared:
      prefactor_ = 2.0 * (m - 1.0) / (m * log2m_);
      snr_coeff_ = log2m_ / (4.0 * (m - 1.0) * (m - 1.0));
      break;
    case Scheme::pam:
      // Gray-coded IM/DD M-PAM: Q(sqrt(gamma log2 M) / (M - 1)).
      prefactor_ = 2.0 * (m - 1.0) / (m * log2m_);
      snr_coeff_ = log2m_ / ((m - 1.0) * (m - 1.0));
      break;
  }
}

int ModulationSpec::bits_per_symbol() const noexcept {
  const int bits = static_cast<int>(std::lround(log2m_));
  return scheme_ == Scheme::qam_squared ? 2 * bits : bits;
}

std::string ModulationSpec::describe() const {
  if (scheme_ == Scheme::ook) return "OOK";
  const std::string m = std::to_string(order_);
  switch (scheme_) {
    case Scheme::pam: return m + "-PAM";
    case Scheme::qam: return m + "-QAM";
    case Scheme::qam_squared: return m + "^2-QAM";
    default: return m;
  }
}

double gaussian_q(double x, QMode mode) {
  if (mode == QMode::exact) return 0.5 * std::erfc(x / std::numbers::sqrt2);
  if (x < 0.0) throw DomainError("Chiani approximation needs x >= 0");
  const double x2 = x * x;
  return std::exp(-x2 / 2.0) / 12.0 + std::exp(-2.0 * x2 / 3.0) / 4.0;
}

double conditional_bep(const ModulationSpec& spec, double gamma, QMode mode) {
  if (!(gamma >= 0.0)) throw DomainError("instantaneous SNR must be >= 0");
  const double f = spec.prefactor();
  const double c = spec.snr_coefficient();
  if (mode == QMode::exact) return f * gaussian_q(std::sqrt(c * gamma), QMode::exact);
  // Expanded directly in gamma so the coefficients are exactly c/2 and 2c/3.
  return f * (std::exp(-spec.chiani_coefficient_first() * gamma) / 12.0 +
              std::exp(-spec.chiani_coefficient_second() * gamma) / 4.0);
}

double qam_symbol_error(int order, double gamma, bool drop_radical) {
  if (!is_power_of_two(order)) throw DomainError("QAM order must be a power of two >= 2");
  if (!(gamma >= 0.0)) throw DomainError("SNR must be >= 0");
  const double m = order;
  const double log2m = std::log2(m);
  const double arg = 3.0 * log2m * gamma / (m - 1.0);
  const double q = gaussian_q(drop_radical ? arg : std::sqrt(arg));
  const int bits = static_cast<int>(std::lround(log2m));
  if (bits % 2 == 0) {
    const double p_axis = 2.0 * (1.0 - 1.0 / std::sqrt(m)) * q;
    return 1.0 - (1.0 - p_axis) * (1.0 - p_axis);
  }
  return std::min(1.0, 4.0 * q);
}

UnionBound qam_dmin_union_bound(int order, double power_w, double bit_rate, double noise_std) {
  if (order < 2) throw DomainError("order must be >= 2");
  if (!(power_w > 0.0) || !(bit_rate > 0.0) || !(noise_std > 0.0)) {
    throw DomainError("power, bit rate and noise std must be > 0");
  }
  const double m = order;
  const double log2m = std::log2(m);
  const double d_min = power_w / (m - 1.0) * std::sqrt(2.0 * log2m / bit_rate);
  const double symbol_rate = bit_rate / std::log2(m * m);
  const double arg = power_w / (m - 1.0) * std::sqrt(1.0 / (4.0 * symbol_rate * noise_std * noise_std));
  // Neighbor count (4M - 1)/m as printed, with m read as M.
  const double neighbors = (4.0 * m - 1.0) / m;
  return {d_min, neighbors * gaussian_q(arg)};
}

SnrSpec SnrSpec::from_power(double signal_power_w, double bit_rate, double noise_variance) {
  if (!(signal_power_w >= 0.0) || !(bit_rate > 0.0) || !(noise_variance > 0.0)) {
    throw DomainError("power >= 0, bit rate > 0 and noise variance > 0 required");
  }
  SnrSpec spec;
  spec.signal_power_w = signal_power_w;
  spec.bit_rate = bit_rate;
  spec.noise_variance = noise_variance;
  spec.mean_snr = 2.0 * signal_power_w * signal_power_w / (noise_variance * bit_rate);
  return spec;
}

void SnrSpec::validate() const {
  if (!(mean_snr >= 0.0)) throw DomainError("mean SNR must be >= 0");
  const bool any = signal_power_w || bit_rate || noise_variance;
  const bool all = signal_power_w && bit_rate && noise_variance;
  if (any && !all) throw DomainError("power form needs P, R and noise variance together");
  if (all) {
    const double implied = 2.0 * *signal_power_w * *signal_power_w / (*noise_variance * *bit_rate);
    if (std::abs(implied - mean_snr) > 1e-12 * std::max(1.0, std::abs(implied))) {
      throw DomainError("mean SNR disagrees with 2P^2/(sigma_n^2 R)");
    }
  }
}

}  // namespace fso
