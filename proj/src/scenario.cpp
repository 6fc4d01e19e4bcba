#include "fso/scenario.hpp"

#include "fso/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <exception>

namespace fso {

std::string tool_version() { return FSO_VERSION; }

Topology build_topology(const ScenarioConfig& config) {
  const double rho = config.n_tx > 1 ? config.effective_rho() : 0.0;
  if (config.hop_lengths_m.empty()) {
    return Topology::equidistant(config.link, config.hops, config.n_tx, rho);
  }
  return Topology::from_hop_lengths(config.link, config.hop_lengths_m, config.n_tx, rho);
}

SweepResult run_sweep(const ScenarioConfig& config) {
  require_valid(config);
  const Topology topology = build_topology(config);
  const auto& range = config.sweep;
  const auto count = static_cast<std::int64_t>(std::floor((range.stop_db - range.start_db) / range.step_db + 1e-9)) + 1;

  McOptions mc;
  mc.samples = config.mc.samples;
  mc.seed = config.mc.seed;
  mc.kernel = config.mc.kernel;
  mc.target_relative_error = config.mc.target_relative_error;

  SweepResult result;
  result.points.resize(static_cast<std::size_t>(count));
  std::exception_ptr failure;
  // Outer loop over SNR points; the kernels' own parallel regions nest
  // inactive here, and both levels are thread-count independent.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      BerPoint& p = result.points[static_cast<std::size_t>(i)];
      p.snr_db = range.start_db + static_cast<double>(i) * range.step_db;
      p.ber_closed = system_ber(topology, config.modulation, p.snr_db, config.quadrature, config.composition);
      if (config.mc.enabled) {
        const McEstimate est = semi_analytic_ber(topology, config.modulation, p.snr_db, mc, config.composition);
        p.ber_mc = est.mean;
        p.mc_halfwidth = est.halfwidth_95;
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  result.metadata.emplace_back("tool", "fsober " + tool_version());
  for (auto& kv : config.echo()) result.metadata.push_back(std::move(kv));
  result.metadata.emplace_back("closed_form", "gauss-hermite average of the chiani conditional BEP");
  if (config.mc.enabled) {
    result.metadata.emplace_back("mc_method", "semi-analytic average of the conditional BEP, 95% normal CI");
  }
  if (config.modulation.substituted_formula()) {
    result.metadata.emplace_back("substitution.pam_bep", "standard IM/DD Gray-coded M-PAM BEP (substituted formula)");
  }
  return result;
}

double snr_at_target_ber(const ScenarioConfig& config, double target) {
  if (!(target > 0.0 && target <= 0.5)) throw DomainError("target BER must lie in (0, 0.5]");
  require_valid(config);
  const Topology topology = build_topology(config);
  auto ber = [&](double db) {
    return system_ber(topology, config.modulation, db, config.quadrature, config.composition);
  };
  double lo = config.bracket_low_db;
  double hi = config.bracket_high_db;
  const double ber_lo = ber(lo);
  if (ber_lo <= target) return lo;
  const double ber_hi = ber(hi);
  if (ber_hi > target) {
    throw NotAchievableError(fmt::format("target BER {:g} not reached in [{:g}, {:g}] dB: BER is {:.6e} at "
                                         "{:g} dB and {:.6e} at {:g} dB",
                                         target, lo, hi, ber_lo, lo, ber_hi, hi),
                             ber_lo, ber_hi);
  }
  // BER is non-increasing in SNR, so plain bisection on the sign is safe.
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (ber(mid) > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double compare_gain(const ScenarioConfig& a, const ScenarioConfig& b, double target) {
  return snr_at_target_ber(a, target) - snr_at_target_ber(b, target);
}

}  // namespace fso
