#pragma once

// Conditional (fixed-channel) error probabilities for the intensity
// modulation formats. Every binary-decision kernel has the shape
//
//   P(e | gamma) = F * Q(sqrt(c * gamma))
//
// so a scheme is fully described by its prefactor F and its SNR
// coefficient c. The two-exponential Chiani form replaces Q(x) with
// (1/12) e^{-x^2/2} + (1/4) e^{-2x^2/3}.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace fso {

enum class Scheme { ook, pam, qam, qam_squared };

enum class QMode { exact, chiani };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);
std::string_view to_string(QMode mode);
QMode parse_qmode(std::string_view text);

/// Modulation format plus constellation order. For qam_squared, `order` is
/// the per-axis amplitude count M and the constellation has M^2 points.
class ModulationSpec {
public:
  /// Throws DomainError unless M is a power of two >= 2 (OOK forces M = 2).
  ModulationSpec(Scheme scheme, int order);

  static ModulationSpec ook() { return {Scheme::ook, 2}; }

  Scheme scheme() const noexcept { return scheme_; }
  int order() const noexcept { return order_; }
  double log2_order() const noexcept { return log2m_; }

  /// Bits carried per channel use.
  int bits_per_symbol() const noexcept;

  /// F in P(e|gamma) = F * Q(sqrt(c gamma)).
  double prefactor() const noexcept { return prefactor_; }
  /// c in P(e|gamma) = F * Q(sqrt(c gamma)).
  double snr_coefficient() const noexcept { return snr_coeff_; }
  /// Exponent coefficients of the two Chiani terms: c/2 and 2c/3.
  double chiani_coefficient_first() const noexcept { return snr_coeff_ / 2.0; }
  double chiani_coefficient_second() const noexcept { return 2.0 * snr_coeff_ / 3.0; }

  /// True when the kernel is the stand-in IM/DD PAM formula rather than a
  /// closed form carried through from the derivation.
  bool substituted_formula() const noexcept { return scheme_ == Scheme::pam; }

  std::string describe() const;

  friend bool operator==(const ModulationSpec&, const ModulationSpec&) = default;

private:
  Scheme scheme_;
  int order_;
  double log2m_;
  double prefactor_;
  double snr_coeff_;
};

/// Gaussian tail probability. Exact mode is erfc-based; Chiani mode is the
/// two-exponential upper approximation and rejects x < 0.
double gaussian_q(double x, QMode mode = QMode::exact);

/// P(e | gamma) for a fixed instantaneous SNR gamma >= 0.
double conditional_bep(const ModulationSpec& spec, double gamma, QMode mode = QMode::exact);

/// Rectangular M-QAM symbol-error probability: 1 - (1 - P_sqrtM)^2 for even
/// log2 M, the 4Q(...) upper bound for odd log2 M. `drop_radical` drops the
/// square root inside Q for audit comparisons.
double qam_symbol_error(int order, double gamma, bool drop_radical = false);

struct UnionBound {
  double d_min;
  double symbol_error;
};

/// DC-biased M^2-QAM minimum distance and its union-bound symbol error.
UnionBound qam_dmin_union_bound(int order, double power_w, double bit_rate, double noise_std);

/// Electrical SNR, either given directly or through its power form 2P^2/(sigma_n^2 R).
struct SnrSpec {
  double mean_snr = 0.0;
  std::optional<double> signal_power_w;
  std::optional<double> bit_rate;
  std::optional<double> noise_variance;

  static SnrSpec from_power(double signal_power_w, double bit_rate, double noise_variance);
  /// Throws DomainError when mean_snr < 0 or disagrees with the power form.
  void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace fso
