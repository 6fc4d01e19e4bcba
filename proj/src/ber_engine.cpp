#include "fso/ber_engine.hpp"

#include "fso/error.hpp"
#include "fso/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fso {

namespace {

constexpr std::uint64_t kTensorBlock = 4096;

void check_hop_inputs(double gamma_bar, double beta) {
  if (!(gamma_bar >= 0.0)) throw DomainError("mean SNR must be >= 0");
  if (!(beta > 0.0)) throw DomainError("normalized path loss must be > 0");
}

std::uint64_t tensor_size(int order, int n_tx) {
  std::uint64_t points = 1;
  for (int i = 0; i < n_tx; ++i) {
    points *= static_cast<std::uint64_t>(order);
    if (points > kMaxTensorPoints) {
      throw ResourceError("tensor rule of order " + std::to_string(order) + " over " +
                          std::to_string(n_tx) + " transmitters exceeds " +
                          std::to_string(kMaxTensorPoints) + " points; reduce the quadrature order");
    }
  }
  return points;
}

// Everything the tensor sum needs, precomputed once per call.
struct TensorKernel {
  int n_tx;
  int order;
  const std::vector<double>& nodes;
  std::vector<double> norm_weights;  // w_i / sqrt(pi)
  Eigen::MatrixXd scaled_sqrt;       // sqrt(32) * C
  double offset;                     // -4 sigma^2
  double a1, a2;                     // Chiani exponents times beta^2 gbar / N_t

  TensorKernel(const ModulationSpec& spec, double gamma_bar, double beta, const TurbulenceStat& stat,
               const QuadratureRule& rule)
      : n_tx(stat.n_tx()),
        order(rule.order),
        nodes(rule.nodes),
        norm_weights(rule.weights),
        scaled_sqrt(std::sqrt(32.0) * stat.covariance_sqrt),
        offset(-4.0 * stat.sigma * stat.sigma) {
    for (double& w : norm_weights) w /= std::sqrt(std::numbers::pi);
    const double b = beta * beta * gamma_bar / n_tx;
    a1 = spec.chiani_coefficient_first() * b;
    a2 = spec.chiani_coefficient_second() * b;
  }

  double term(std::uint64_t flat, std::vector<int>& digits) const {
    double weight = 1.0;
    for (int j = 0; j < n_tx; ++j) {
      digits[j] = static_cast<int>(flat % order);
      flat /= order;
      weight *= norm_weights[digits[j]];
    }
    double gain_sum = 0.0;
    for (int i = 0; i < n_tx; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_tx; ++j) s += scaled_sqrt(i, j) * nodes[digits[j]];
      gain_sum += std::exp(s + offset);
    }
    return weight * (std::exp(-a1 * gain_sum) / 12.0 + std::exp(-a2 * gain_sum) / 4.0);
  }
};

double tensor_sum_parallel(const TensorKernel& kernel, std::uint64_t points) {
  const std::uint64_t blocks = (points + kTensorBlock - 1) / kTensorBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel
  {
    std::vector<int> digits(kernel.n_tx);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * kTensorBlock;
      const std::uint64_t end = std::min(points, begin + kTensorBlock);
      double acc = 0.0;
      for (std::uint64_t t = begin; t < end; ++t) acc += kernel.term(t, digits);
      partial[b] = acc;
    }
  }
  return pairwise_sum(partial);
}

}  // namespace

std::string_view to_string(Composition c) {
  return c == Composition::upper_bound ? "upper_bound" : "identical_approx";
}

Composition parse_composition(std::string_view text) {
  if (text == "upper_bound") return Composition::upper_bound;
  if (text == "identical_approx") return Composition::identical_approx;
  throw DomainError("unknown composition '" + std::string(text) + "'");
}

Topology Topology::equidistant(const LinkScenario& link, int hops, int n_tx, double rho) {
  if (hops < 1) throw DomainError("hop count must be >= 1");
  std::vector<double> lengths(hops, link.link_distance_m / hops);
  return from_hop_lengths(link, lengths, n_tx, rho);
}

Topology Topology::from_hop_lengths(const LinkScenario& link, std::span<const double> lengths_m,
                                    int n_tx, double rho) {
  link.validate();
  if (lengths_m.empty()) throw DomainError("topology needs at least one hop");
  if (n_tx < 1) throw DomainError("n_tx must be >= 1");
  Topology topo;
  topo.n_tx = n_tx;
  topo.rho = rho;
  for (double length : lengths_m) {
    HopChannel hop;
    hop.length_m = length;
    hop.beta = lengths_m.size() == 1 && length == link.link_distance_m
                   ? 1.0
                   : normalized_path_loss(link, length);
    hop.stat = TurbulenceStat::make(std::sqrt(rytov_variance(link, length)), n_tx, rho);
    topo.hops.push_back(std::move(hop));
  }
  return topo;
}

double ber_hop_siso(const ModulationSpec& spec, double gamma_bar, double beta, double sigma,
                    const QuadratureRule& rule) {
  check_hop_inputs(gamma_bar, beta);
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  const double b = beta * beta * gamma_bar;
  if (sigma == 0.0) return conditional_bep(spec, b, QMode::chiani);

  const double a1 = spec.chiani_coefficient_first() * b;
  const double a2 = spec.chiani_coefficient_second() * b;
  const double offset = -4.0 * sigma * sigma;
  const double scale = std::sqrt(32.0 * sigma * sigma);
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double gain = std::exp(offset + rule.nodes[i] * scale);
    acc += rule.weights[i] * (std::exp(-a1 * gain) / 12.0 + std::exp(-a2 * gain) / 4.0);
  }
  return spec.prefactor() / std::sqrt(std::numbers::pi) * acc;
}

int miso_quadrature_order(int requested, int n_tx) {
  double points = std::pow(static_cast<double>(requested), n_tx);
  if (points > static_cast<double>(kPreferredTensorPoints)) {
    return std::min(requested, kReducedMisoQuadratureOrder);
  }
  return requested;
}

double ber_hop_miso(const ModulationSpec& spec, double gamma_bar, double beta,
                    const TurbulenceStat& stat, const QuadratureRule& rule) {
  if (stat.n_tx() == 1) return ber_hop_siso(spec, gamma_bar, beta, stat.sigma, rule);
  check_hop_inputs(gamma_bar, beta);
  if (stat.sigma == 0.0) return conditional_bep(spec, beta * beta * gamma_bar, QMode::chiani);
  const std::uint64_t points = tensor_size(rule.order, stat.n_tx());
  const TensorKernel kernel(spec, gamma_bar, beta, stat, rule);
  return spec.prefactor() * tensor_sum_parallel(kernel, points);
}

double compose_multihop(std::span<const double> per_hop, Composition mode) {
  if (per_hop.empty()) throw DomainError("composition needs at least one hop");
  for (double p : per_hop) {
    if (!(p >= 0.0 && p <= 0.5)) throw DomainError("per-hop BER must lie in [0, 0.5]");
  }
  if (per_hop.size() == 1) return per_hop[0];
  // log1p/expm1 keep full relative precision for tiny per-hop BERs.
  double log_survive = 0.0;
  for (double p : per_hop) {
    log_survive += mode == Composition::upper_bound ? std::log1p(-p) : std::log1p(-2.0 * p);
  }
  const double flipped = 0.0 - std::expm1(log_survive);  // +0 rather than -0
  return mode == Composition::upper_bound ? flipped : 0.5 * flipped;
}

double compose_multihop(double ber_k, int hops, Composition mode) {
  if (hops < 1) throw DomainError("hop count must be >= 1");
  std::vector<double> per_hop(hops, ber_k);
  return compose_multihop(per_hop, mode);
}

double system_ber(const Topology& topology, const ModulationSpec& spec, double gamma_bar_db,
                  const QuadratureOrders& orders, Composition mode) {
  if (topology.hops.empty()) throw DomainError("topology has no hops");
  const double gamma_bar = db_to_linear(gamma_bar_db);
  const QuadratureRule& siso_rule = cached_gauss_hermite_rule(orders.siso);
  const QuadratureRule& miso_rule =
      cached_gauss_hermite_rule(miso_quadrature_order(orders.miso, topology.n_tx));

  std::vector<double> per_hop;
  per_hop.reserve(topology.hops.size());
  const HopChannel* previous = nullptr;
  for (const HopChannel& hop : topology.hops) {
    if (previous && previous->length_m == hop.length_m && previous->beta == hop.beta &&
        previous->stat.sigma == hop.stat.sigma) {
      per_hop.push_back(per_hop.back());
    } else if (topology.n_tx == 1) {
      per_hop.push_back(ber_hop_siso(spec, gamma_bar, hop.beta, hop.stat.sigma, siso_rule));
    } else {
      per_hop.push_back(ber_hop_miso(spec, gamma_bar, hop.beta, hop.stat, miso_rule));
    }
    per_hop.back() = std::min(per_hop.back(), 0.5);
    previous = &hop;
  }
  return std::min(compose_multihop(per_hop, mode), 0.5);
}

namespace reference {

double ber_hop_tensor(const ModulationSpec& spec, double gamma_bar, double beta,
                      const TurbulenceStat& stat, const QuadratureRule& rule) {
  check_hop_inputs(gamma_bar, beta);
  const std::uint64_t points = tensor_size(rule.order, stat.n_tx());
  const TensorKernel kernel(spec, gamma_bar, beta, stat, rule);
  std::vector<int> digits(stat.n_tx());
  double acc = 0.0;
  for (std::uint64_t t = 0; t < points; ++t) acc += kernel.term(t, digits);
  return spec.prefactor() * acc;
}

double ber_hop_miso(const ModulationSpec& spec, double gamma_bar, double beta,
                    const TurbulenceStat& stat, const QuadratureRule& rule) {
  if (stat.n_tx() == 1) return fso::ber_hop_siso(spec, gamma_bar, beta, stat.sigma, rule);
  if (stat.sigma == 0.0) return conditional_bep(spec, beta * beta * gamma_bar, QMode::chiani);
  return ber_hop_tensor(spec, gamma_bar, beta, stat, rule);
}

}  // namespace reference

}  // namespace fso
