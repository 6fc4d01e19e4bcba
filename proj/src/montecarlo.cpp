#include "fso/montecarlo.hpp"

#include "fso/error.hpp"
#include "fso/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fso {

namespace {

constexpr double kZ95 = 1.96;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ chunk);
}

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments out;
  out.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (b.n / out.n);
  out.m2 = a.m2 + b.m2 + delta * delta * (a.n * b.n / out.n);
  return out;
}

Moments merge_pairwise(std::span<const Moments> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  return merge(merge_pairwise(parts.first(half)), merge_pairwise(parts.subspan(half)));
}

McEstimate to_estimate(const Moments& m, std::uint64_t seed) {
  McEstimate est;
  est.mean = m.mean;
  est.samples = static_cast<std::uint64_t>(m.n);
  est.seed = seed;
  const double var = m.n > 1.0 ? m.m2 / (m.n - 1.0) : 0.0;
  est.halfwidth_95 = kZ95 * std::sqrt(std::max(var, 0.0) / m.n);
  return est;
}

// Draws one correlated log-normal gain vector into `gains`.
class GainSampler {
public:
  GainSampler(const TurbulenceStat& stat, std::uint64_t seed)
      : stat_(stat), engine_(seed), z_(stat.n_tx()) {}

  void next(Eigen::VectorXd& gains) {
    for (Eigen::Index j = 0; j < z_.size(); ++j) z_(j) = normal_(engine_);
    gains.noalias() = stat_.covariance_sqrt * z_;
    for (Eigen::Index i = 0; i < gains.size(); ++i) gains(i) = std::exp(2.0 * (stat_.mu + gains(i)));
  }

  std::mt19937_64& engine() { return engine_; }
  std::normal_distribution<double>& normal() { return normal_; }

private:
  const TurbulenceStat& stat_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  Eigen::VectorXd z_;
};

struct HopProblem {
  const ModulationSpec& spec;
  double effective_scale;  // beta^2 * gbar
  const TurbulenceStat& stat;
  QMode kernel;
  std::uint64_t seed;
  std::uint64_t stream;
};

Moments run_chunk(const HopProblem& p, std::uint64_t chunk, std::uint64_t count) {
  GainSampler sampler(p.stat, chunk_seed(p.seed, p.stream, chunk));
  Eigen::VectorXd gains(p.stat.n_tx());
  const double n_tx = p.stat.n_tx();
  Moments m;
  for (std::uint64_t s = 0; s < count; ++s) {
    sampler.next(gains);
    const double mean_gain = gains.sum() / n_tx;
    m.add(conditional_bep(p.spec, p.effective_scale * mean_gain * mean_gain, p.kernel));
  }
  return m;
}

std::uint64_t chunk_count(std::uint64_t samples) { return (samples + kMcChunkSize - 1) / kMcChunkSize; }

std::uint64_t chunk_length(std::uint64_t samples, std::uint64_t chunk) {
  return std::min(kMcChunkSize, samples - chunk * kMcChunkSize);
}

// Chunks [first, first + samples) of the stream, merged pairwise.
Moments run_chunks_parallel(const HopProblem& p, std::uint64_t first_chunk, std::uint64_t samples) {
  const std::uint64_t chunks = chunk_count(samples);
  std::vector<Moments> parts(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const auto idx = static_cast<std::uint64_t>(c);
    parts[idx] = run_chunk(p, first_chunk + idx, chunk_length(samples, idx));
  }
  return merge_pairwise(parts);
}

void check_hop(double gamma_bar, double beta) {
  if (!(gamma_bar >= 0.0)) throw DomainError("mean SNR must be >= 0");
  if (!(beta > 0.0)) throw DomainError("normalized path loss must be > 0");
}

McEstimate hop_estimate(const ModulationSpec& spec, double gamma_bar, double beta,
                        const TurbulenceStat& stat, const McOptions& options, std::uint64_t stream) {
  check_hop(gamma_bar, beta);
  if (options.samples < kMinSemiAnalyticSamples) {
    throw DomainError("semi-analytic Monte Carlo needs at least 10^4 samples");
  }
  const HopProblem problem{spec, beta * beta * gamma_bar, stat, options.kernel, options.seed, stream};
  // Round size is a whole number of chunks so later rounds continue the stream.
  const std::uint64_t round = chunk_count(options.samples) * kMcChunkSize;
  Moments total = run_chunks_parallel(problem, 0, options.target_relative_error ? round : options.samples);
  if (options.target_relative_error) {
    std::uint64_t next_chunk = chunk_count(round);
    while (true) {
      const McEstimate est = to_estimate(total, options.seed);
      if (est.mean > 0.0 && est.halfwidth_95 / est.mean <= *options.target_relative_error) break;
      if (est.samples + round > options.max_samples) break;
      total = merge(total, run_chunks_parallel(problem, next_chunk, round));
      next_chunk += chunk_count(round);
    }
  }
  return to_estimate(total, options.seed);
}

}  // namespace

Eigen::MatrixXd sample_channel_gains(const TurbulenceStat& stat, std::uint64_t count,
                                     std::uint64_t seed) {
  if (count < 1) throw DomainError("sample count must be >= 1");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), stat.n_tx());
  const std::uint64_t chunks = chunk_count(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const auto idx = static_cast<std::uint64_t>(c);
    GainSampler sampler(stat, chunk_seed(seed, 0, idx));
    Eigen::VectorXd gains(stat.n_tx());
    const std::uint64_t begin = idx * kMcChunkSize;
    for (std::uint64_t s = 0; s < chunk_length(count, idx); ++s) {
      sampler.next(gains);
      out.row(static_cast<Eigen::Index>(begin + s)) = gains.transpose();
    }
  }
  return out;
}

McEstimate semi_analytic_hop(const ModulationSpec& spec, double gamma_bar, double beta,
                             const TurbulenceStat& stat, const McOptions& options) {
  return hop_estimate(spec, gamma_bar, beta, stat, options, 0);
}

McEstimate semi_analytic_ber(const Topology& topology, const ModulationSpec& spec,
                             double gamma_bar_db, const McOptions& options, Composition mode) {
  if (topology.hops.empty()) throw DomainError("topology has no hops");
  const double gamma_bar = db_to_linear(gamma_bar_db);

  // Identical hops share one estimate (and are therefore fully correlated).
  std::vector<McEstimate> group_est;
  std::vector<std::size_t> group_of(topology.hops.size());
  std::vector<std::size_t> group_first;
  for (std::size_t k = 0; k < topology.hops.size(); ++k) {
    const HopChannel& hop = topology.hops[k];
    std::size_t g = group_first.size();
    for (std::size_t i = 0; i < group_first.size(); ++i) {
      const HopChannel& other = topology.hops[group_first[i]];
      if (other.length_m == hop.length_m && other.beta == hop.beta && other.stat.sigma == hop.stat.sigma) {
        g = i;
        break;
      }
    }
    if (g == group_first.size()) {
      group_first.push_back(k);
      group_est.push_back(hop_estimate(spec, gamma_bar, hop.beta, hop.stat, options, k));
    }
    group_of[k] = g;
  }

  std::vector<double> per_hop(topology.hops.size());
  for (std::size_t k = 0; k < per_hop.size(); ++k) {
    per_hop[k] = std::clamp(group_est[group_of[k]].mean, 0.0, 0.5);
  }

  McEstimate out;
  out.seed = options.seed;
  out.samples = group_est.front().samples;
  out.mean = std::min(compose_multihop(per_hop, mode), 0.5);

  // Delta method: d(composed)/d(p_k) is the product of the other hops' survival terms.
  std::vector<double> group_grad(group_est.size(), 0.0);
  for (std::size_t k = 0; k < per_hop.size(); ++k) {
    double grad = 1.0;
    for (std::size_t j = 0; j < per_hop.size(); ++j) {
      if (j == k) continue;
      grad *= mode == Composition::upper_bound ? 1.0 - per_hop[j] : 1.0 - 2.0 * per_hop[j];
    }
    group_grad[group_of[k]] += grad;
  }
  double var = 0.0;
  for (std::size_t g = 0; g < group_est.size(); ++g) {
    const double sd = group_est[g].halfwidth_95 / kZ95;
    var += group_grad[g] * group_grad[g] * sd * sd;
  }
  out.halfwidth_95 = kZ95 * std::sqrt(var);
  return out;
}

McEstimate bitlevel_ook_ber(double gamma_bar_db, const TurbulenceStat& stat, double beta,
                            std::uint64_t bits, std::uint64_t seed) {
  if (stat.n_tx() != 1) throw DomainError("bit-level simulation is SISO only");
  if (bits < kMinBitLevelBits) throw DomainError("bit-level simulation needs at least 10^5 bits");
  if (!(beta > 0.0)) throw DomainError("normalized path loss must be > 0");
  const double amplitude_scale = beta * std::sqrt(db_to_linear(gamma_bar_db));
  const double noise_std = std::sqrt(0.5);

  const std::uint64_t chunks = chunk_count(bits);
  std::vector<std::uint64_t> errors(chunks, 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const auto idx = static_cast<std::uint64_t>(c);
    GainSampler sampler(stat, chunk_seed(seed, 0xb17u, idx));
    Eigen::VectorXd gain(1);
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < chunk_length(bits, idx); ++s) {
      sampler.next(gain);
      const double amplitude = amplitude_scale * gain(0);
      const bool bit = (sampler.engine()() >> 63) != 0;
      const double received = (bit ? amplitude : 0.0) + noise_std * sampler.normal()(sampler.engine());
      const bool decided = received > 0.5 * amplitude;
      count += decided != bit ? 1 : 0;
    }
    errors[idx] = count;
  }
  std::uint64_t total = 0;
  for (std::uint64_t e : errors) total += e;

  McEstimate est;
  est.samples = bits;
  est.seed = seed;
  est.mean = static_cast<double>(total) / static_cast<double>(bits);
  est.halfwidth_95 = kZ95 * std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(bits));
  return est;
}

namespace reference {

McEstimate semi_analytic_hop(const ModulationSpec& spec, double gamma_bar, double beta,
                             const TurbulenceStat& stat, std::uint64_t samples,
                             std::uint64_t seed, QMode kernel) {
  check_hop(gamma_bar, beta);
  const HopProblem problem{spec, beta * beta * gamma_bar, stat, kernel, seed, 0};
  Moments total;
  for (std::uint64_t c = 0; c < chunk_count(samples); ++c) {
    total = merge(total, run_chunk(problem, c, chunk_length(samples, c)));
  }
  return to_estimate(total, seed);
}

}  // namespace reference

}  // namespace fso
