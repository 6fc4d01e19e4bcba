#pragma once

// Link geometry and log-normal turbulence statistics for free-space optical
// paths. Everything here is a pure function of its inputs; all lengths are
// SI meters and angles are radians unless a name says otherwise.

#include <Eigen/Dense>

namespace fso {

/// Geometry, weather and turbulence inputs for one optical path.
struct LinkScenario {
  double wavelength_m = 1550e-9;
  double link_distance_m = 1200.0;
  double attenuation_db_per_km = 0.43;
  double cn2 = 5e-14;  ///< refractive-index structure constant, m^(-2/3)
  double tx_aperture_m = 0.2;
  double rx_aperture_m = 0.2;
  double divergence_rad = 2e-3;
  double tx_separation_m = 0.0;

  /// Optical wave number 2*pi/lambda.
  double wave_number() const;

  /// Throws DomainError when a field breaks its invariant.
  void validate() const;

  /// Clear-weather column of the reference parameter table.
  static LinkScenario clear_weather();
  /// Light-fog column of the reference parameter table.
  static LinkScenario light_fog();
};

/// Log-amplitude statistics of one hop, for one or more correlated transmitters.
struct TurbulenceStat {
  double sigma = 0.0;          ///< log-amplitude standard deviation
  double mu = 0.0;             ///< log-amplitude mean, always -sigma^2
  Eigen::MatrixXd covariance;  ///< N_t x N_t, entries sigma^2 * rho^|i-j|
  Eigen::MatrixXd covariance_sqrt;

  int n_tx() const { return static_cast<int>(covariance.rows()); }

  /// Builds the unit-mean statistic for n_tx transmitters with correlation rho.
  static TurbulenceStat make(double sigma, int n_tx = 1, double rho = 0.0);
};

/// Rytov log-amplitude variance 0.124 k^(7/6) Cn2 L^(11/6) at `distance_m`.
double rytov_variance(const LinkScenario& scenario, double distance_m);

/// Atmospheric attenuation times geometric spreading loss at `distance_m`.
double path_loss(const LinkScenario& scenario, double distance_m);

/// Path loss of one of `hop_count` equal hops relative to the direct link.
double normalized_hop_path_loss(const LinkScenario& scenario, int hop_count);

/// Path loss of a hop of length `hop_m` relative to the direct link.
double normalized_path_loss(const LinkScenario& scenario, double hop_m);

/// Correlation length sqrt(lambda * distance).
double correlation_length(const LinkScenario& scenario, double distance_m);

/// exp(-(d/d0)^(5/3)) for the scenario's transmitter separation over the full link.
double correlation_coefficient(const LinkScenario& scenario);

/// Same, over a path of `distance_m` (hops use their own length).
double correlation_coefficient(const LinkScenario& scenario, double distance_m);

/// Transmitter separation that realizes correlation `rho` over `distance_m`.
double separation_for_correlation(const LinkScenario& scenario, double distance_m, double rho);

/// Toeplitz spatial covariance sigma_y^2 * rho^|i-j|.
Eigen::MatrixXd covariance_matrix(int n_tx, double sigma_y_sq, double rho);

/// sqrt(ln(1 + SI)) / 2.
double sigma_from_scintillation_index(double si);

enum class DensityKind { irradiance, snr };

/// Log-normal density of the irradiance h, or of the instantaneous SNR
/// gamma = beta^2 * mean_snr * h^2. `mean_snr` and `beta` are ignored for
/// the irradiance kind.
double channel_density(DensityKind kind, double value, const TurbulenceStat& stat,
                       double mean_snr = 1.0, double beta = 1.0);

}  // namespace fso
