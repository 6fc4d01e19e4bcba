#pragma once

// Closed-form average BER of log-normal FSO hops and their decode-and-forward
// composition.
//
// A single hop averages the Chiani form of the scheme's conditional BEP over
// the channel with Gauss-Hermite quadrature. With per-node gain
// g_i = exp(-4 sigma^2 + x_i sqrt(32 sigma^2)) the SISO hop is
//
//   BER = F/sqrt(pi) * sum_i w_i [ e^{-(c/2) b g_i}/12 + e^{-(2c/3) b g_i}/4 ],
//
// with b = beta^2 * mean SNR. The repetition-coded MISO hop replaces g_i by
// (1/N_t) sum_k exp(sqrt(32) (C x)_k - 4 sigma^2) over an N_t-fold tensor
// rule, C being the symmetric square root of the spatial covariance.

#include "fso/channel.hpp"
#include "fso/modulation.hpp"
#include "fso/numerics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fso {

inline constexpr std::uint64_t kMaxTensorPoints = 10'000'000;
inline constexpr std::uint64_t kPreferredTensorPoints = 1'000'000;
inline constexpr int kDefaultQuadratureOrder = 64;
inline constexpr int kReducedMisoQuadratureOrder = 20;

/// One hop of a relay chain.
struct HopChannel {
  double length_m = 0.0;
  double beta = 1.0;  ///< path loss normalized to the direct link
  TurbulenceStat stat;
};

struct Topology {
  int n_tx = 1;
  double rho = 0.0;
  std::vector<HopChannel> hops;

  int hop_count() const { return static_cast<int>(hops.size()); }

  /// K equidistant hops of length l/K; per-hop sigma and beta are recomputed
  /// from the hop length.
  static Topology equidistant(const LinkScenario& link, int hops, int n_tx = 1, double rho = 0.0);

  /// Hops of explicit lengths (meters); beta is still relative to the full link.
  static Topology from_hop_lengths(const LinkScenario& link, std::span<const double> lengths_m,
                                   int n_tx = 1, double rho = 0.0);
};

struct BerPoint {
  double snr_db = 0.0;
  double ber_closed = 0.0;
  std::optional<double> ber_mc;
  std::optional<double> mc_halfwidth;

  friend bool operator==(const BerPoint&, const BerPoint&) = default;
};

enum class Composition { upper_bound, identical_approx };

std::string_view to_string(Composition c);
Composition parse_composition(std::string_view text);

/// SISO hop closed form. sigma = 0 bypasses the quadrature.
double ber_hop_siso(const ModulationSpec& spec, double gamma_bar, double beta, double sigma,
                    const QuadratureRule& rule);

/// Repetition-coded MISO hop over the N_t-fold tensor rule (parallel kernel).
/// N_t = 1 delegates to ber_hop_siso. Throws ResourceError when
/// order^N_t exceeds kMaxTensorPoints.
double ber_hop_miso(const ModulationSpec& spec, double gamma_bar, double beta,
                    const TurbulenceStat& stat, const QuadratureRule& rule);

/// Order used for an N_t-fold tensor when the caller asks for `requested`:
/// falls back to kReducedMisoQuadratureOrder above kPreferredTensorPoints.
int miso_quadrature_order(int requested, int n_tx);

/// Multi-hop DF composition. upper_bound: 1 - prod(1 - p_k).
/// identical_approx: (1/2)[1 - prod(1 - 2 p_k)], i.e. (1/2)[1 - (1 - 2p)^K]
/// for identical hops.
double compose_multihop(std::span<const double> per_hop, Composition mode);
double compose_multihop(double ber_k, int hops, Composition mode);

struct QuadratureOrders {
  int siso = kDefaultQuadratureOrder;
  int miso = kDefaultQuadratureOrder;
};

/// End-to-end closed-form BER at `gamma_bar_db`, clamped to 0.5.
double system_ber(const Topology& topology, const ModulationSpec& spec, double gamma_bar_db,
                  const QuadratureOrders& orders = {},
                  Composition mode = Composition::identical_approx);

namespace reference {

/// Serial, unblocked tensor sum used to check the parallel kernel.
double ber_hop_miso(const ModulationSpec& spec, double gamma_bar, double beta,
                    const TurbulenceStat& stat, const QuadratureRule& rule);

/// Tensor kernel forced through the general path even for N_t = 1.
double ber_hop_tensor(const ModulationSpec& spec, double gamma_bar, double beta,
                      const TurbulenceStat& stat, const QuadratureRule& rule);

}  // namespace reference

}  // namespace fso
