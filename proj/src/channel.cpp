#include "fso/channel.hpp"

#include "fso/error.hpp"
#include "fso/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fso {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw DomainError(std::string(name) + " must be > 0");
}

}  // namespace

double LinkScenario::wave_number() const { return 2.0 * std::numbers::pi / wavelength_m; }

void LinkScenario::validate() const {
  require_positive(wavelength_m, "wavelength");
  require_positive(link_distance_m, "link distance");
  require_positive(tx_aperture_m, "transmit aperture");
  require_positive(rx_aperture_m, "receive aperture");
  require_positive(divergence_rad, "divergence angle");
  if (!(attenuation_db_per_km >= 0.0)) throw DomainError("attenuation must be >= 0");
  if (!(cn2 >= 0.0)) throw DomainError("Cn2 must be >= 0");
  if (!(tx_separation_m >= 0.0)) throw DomainError("transmitter separation must be >= 0");
}

LinkScenario LinkScenario::clear_weather() { return LinkScenario{}; }

LinkScenario LinkScenario::light_fog() {
  LinkScenario s;
  s.attenuation_db_per_km = 20.0;
  s.cn2 = 1.7e-14;
  return s;
}

TurbulenceStat TurbulenceStat::make(double sigma, int n_tx, double rho) {
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  TurbulenceStat stat;
  stat.sigma = sigma;
  stat.mu = -sigma * sigma;
  stat.covariance = covariance_matrix(n_tx, sigma * sigma, rho);
  stat.covariance_sqrt = symmetric_matrix_sqrt(stat.covariance);
  return stat;
}

double rytov_variance(const LinkScenario& scenario, double distance_m) {
  require_positive(distance_m, "distance");
  if (!(scenario.cn2 >= 0.0)) throw DomainError("Cn2 must be >= 0");
  return 0.124 * std::pow(scenario.wave_number(), 7.0 / 6.0) * scenario.cn2 *
         std::pow(distance_m, 11.0 / 6.0);
}

double path_loss(const LinkScenario& scenario, double distance_m) {
  require_positive(distance_m, "distance");
  const double atmospheric = std::pow(10.0, -scenario.attenuation_db_per_km * (distance_m / 1000.0) / 10.0);
  const double spread = scenario.tx_aperture_m + scenario.divergence_rad * distance_m;
  return atmospheric * scenario.rx_aperture_m * scenario.rx_aperture_m / (spread * spread);
}

double normalized_path_loss(const LinkScenario& scenario, double hop_m) {
  return path_loss(scenario, hop_m) / path_loss(scenario, scenario.link_distance_m);
}

double normalized_hop_path_loss(const LinkScenario& scenario, int hop_count) {
  if (hop_count < 1) throw DomainError("hop count must be >= 1");
  if (hop_count == 1) return 1.0;
  return normalized_path_loss(scenario, scenario.link_distance_m / hop_count);
}

double correlation_length(const LinkScenario& scenario, double distance_m) {
  require_positive(distance_m, "distance");
  return std::sqrt(scenario.wavelength_m * distance_m);
}

double correlation_coefficient(const LinkScenario& scenario, double distance_m) {
  if (!(scenario.tx_separation_m >= 0.0)) throw DomainError("transmitter separation must be >= 0");
  const double ratio = scenario.tx_separation_m / correlation_length(scenario, distance_m);
  return std::exp(-std::pow(ratio, 5.0 / 3.0));
}

double correlation_coefficient(const LinkScenario& scenario) {
  return correlation_coefficient(scenario, scenario.link_distance_m);
}

double separation_for_correlation(const LinkScenario& scenario, double distance_m, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("rho must be in (0, 1]");
  return correlation_length(scenario, distance_m) * std::pow(-std::log(rho), 3.0 / 5.0);
}

Eigen::MatrixXd covariance_matrix(int n_tx, double sigma_y_sq, double rho) {
  if (n_tx < 1) throw DomainError("n_tx must be >= 1");
  if (!(sigma_y_sq >= 0.0)) throw DomainError("sigma_y^2 must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must be in [0, 1]");
  Eigen::MatrixXd gamma(n_tx, n_tx);
  for (int i = 0; i < n_tx; ++i) {
    for (int j = 0; j < n_tx; ++j) {
      // std::pow(0, 0) == 1 keeps the diagonal right for rho = 0.
      gamma(i, j) = sigma_y_sq * std::pow(rho, std::abs(i - j));
    }
  }
  return gamma;
}

double sigma_from_scintillation_index(double si) {
  if (!(si >= 0.0)) throw DomainError("scintillation index must be >= 0");
  return std::sqrt(std::log1p(si)) / 2.0;
}

double channel_density(DensityKind kind, double value, const TurbulenceStat& stat,
                       double mean_snr, double beta) {
  if (!(value > 0.0)) throw DomainError("density argument must be > 0");
  if (stat.sigma == 0.0) throw DegenerateDistributionError("sigma = 0 channel is a point mass");
  const double var = stat.sigma * stat.sigma;
  switch (kind) {
    case DensityKind::irradiance: {
      const double d = std::log(value) - 2.0 * stat.mu;
      return std::exp(-d * d / (8.0 * var)) / (value * std::sqrt(8.0 * std::numbers::pi * var));
    }
    case DensityKind::snr: {
      if (!(mean_snr > 0.0) || !(beta > 0.0)) throw DomainError("mean SNR and beta must be > 0");
      const double d = std::log(value / (beta * beta * mean_snr)) + 4.0 * var;
      return std::exp(-d * d / (32.0 * var)) / (std::sqrt(32.0 * std::numbers::pi * var) * value);
    }
  }
  return 0.0;
}

}  // namespace fso
