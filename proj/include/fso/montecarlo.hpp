#pragma once

// Semi-analytic Monte Carlo: sample correlated log-normal gains, average the
// conditional BEP, report a normal-approximation 95% interval.
//
// Samples are drawn in fixed-size chunks. Chunk j is seeded from
// (seed, stream, j) alone, and chunk statistics are merged in a fixed
// pairwise order, so estimates do not depend on the worker count.

#include "fso/ber_engine.hpp"
#include "fso/channel.hpp"
#include "fso/modulation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace fso {

inline constexpr std::uint64_t kMcChunkSize = 1u << 14;
inline constexpr std::uint64_t kMinSemiAnalyticSamples = 10'000;
inline constexpr std::uint64_t kMinBitLevelBits = 100'000;

struct McEstimate {
  double mean = 0.0;
  double halfwidth_95 = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  QMode kernel = QMode::exact;
  /// When set, keep adding rounds of `samples` until halfwidth/mean falls
  /// below this value or `max_samples` is reached.
  std::optional<double> target_relative_error;
  std::uint64_t max_samples = 100'000'000;
};

/// count x N_t matrix of irradiance gains h_i = exp(2 Y_i), Y = mu 1 + C z.
Eigen::MatrixXd sample_channel_gains(const TurbulenceStat& stat, std::uint64_t count,
                                     std::uint64_t seed);

/// One hop: E[P(e | gamma_eff)] with gamma_eff = beta^2 gbar ((1/N_t) sum h_i)^2.
McEstimate semi_analytic_hop(const ModulationSpec& spec, double gamma_bar, double beta,
                             const TurbulenceStat& stat, const McOptions& options);

/// Whole topology; hops are composed on their means and the interval is
/// propagated with the delta method.
McEstimate semi_analytic_ber(const Topology& topology, const ModulationSpec& spec,
                             double gamma_bar_db, const McOptions& options,
                             Composition mode = Composition::identical_approx);

/// Bit-by-bit OOK through h and AWGN (variance 1/2 at N0 = 1), midpoint
/// threshold per realization. SISO only.
McEstimate bitlevel_ook_ber(double gamma_bar_db, const TurbulenceStat& stat, double beta,
                            std::uint64_t bits, std::uint64_t seed);

namespace reference {

/// Same chunking and seeding as semi_analytic_hop, evaluated serially with a
/// plain left-to-right merge.
McEstimate semi_analytic_hop(const ModulationSpec& spec, double gamma_bar, double beta,
                             const TurbulenceStat& stat, std::uint64_t samples,
                             std::uint64_t seed, QMode kernel);

}  // namespace reference

}  // namespace fso
