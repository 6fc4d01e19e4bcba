// Acceptance suite: one PASS/FAIL line per criterion, followed by the
// measured numbers. Exit status is the number of failing criteria.

#include "fso/ber_engine.hpp"
#include "fso/figures.hpp"
#include "fso/montecarlo.hpp"
#include "fso/parallel.hpp"
#include "fso/scenario.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace fso;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void note(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    details.emplace_back(buf);
  }
};

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Parameter anchors.
Outcome ac1() {
  Outcome o;
  const double sigma = std::sqrt(rytov_variance(LinkScenario::clear_weather(), 1200.0));
  const double from_si = sigma_from_scintillation_index(0.75);
  o.pass = std::abs(sigma - 0.374) <= 0.001 && std::abs(from_si - 0.374) <= 0.001;
  o.note("sigma_x(clear, 1200 m) = %.6f, sigma_x(SI = 0.75) = %.6f, target 0.374 +/- 0.001", sigma, from_si);
  return o;
}

// Closed forms against adaptive integration and semi-analytic MC.
Outcome ac2() {
  Outcome o;
  const std::vector<std::pair<const char*, ModulationSpec>> schemes{
      {"ook", ModulationSpec::ook()}, {"qam M=4", {Scheme::qam, 4}}, {"qam_squared M=4", {Scheme::qam_squared, 4}}};
  const double sigmas[] = {0.1, 0.2183, 0.3744};
  const double gbars[] = {10.0, 100.0, 1000.0};
  const auto& rule = cached_gauss_hermite_rule(kDefaultQuadratureOrder);
  double worst_quad = 0.0;
  int mc_outside = 0, points = 0;
  for (const auto& [name, spec] : schemes) {
    for (double sigma : sigmas) {
      for (double g : gbars) {
        ++points;
        const double closed = ber_hop_siso(spec, g, 1.0, sigma, rule);
        const double integral = oracle::average_ber(spec, g, 1.0, sigma, QMode::chiani);
        const double quad_err = rel_diff(closed, integral);
        worst_quad = std::max(worst_quad, quad_err);

        McOptions opt;
        opt.samples = 1'000'000;
        opt.seed = 1;
        opt.kernel = QMode::chiani;
        const auto est = semi_analytic_hop(spec, g, 1.0, TurbulenceStat::make(sigma), opt);
        const bool inside = std::abs(est.mean - closed) <= est.halfwidth_95;
        if (!inside) ++mc_outside;
        if (quad_err > 1e-5 || !inside) {
          o.note("%s sigma=%.4f gbar=%g: closed %.6e integral %.6e (rel %.2e) mc %.6e +/- %.2e%s", name, sigma, g,
                 closed, integral, quad_err, est.mean, est.halfwidth_95, inside ? "" : "  <- outside CI");
        }
      }
    }
  }
  o.pass = worst_quad <= 1e-5 && mc_outside == 0;
  o.details.insert(o.details.begin(),
                   std::string("max rel diff vs adaptive integration ") + std::to_string(worst_quad) +
                       " (limit 1e-5); MC 95% CI misses " + std::to_string(mc_outside) + "/" +
                       std::to_string(points));
  return o;
}

// Reduction lattice.
Outcome ac3() {
  Outcome o;
  const auto& rule = cached_gauss_hermite_rule(kDefaultQuadratureOrder);
  const std::vector<ModulationSpec> specs{ModulationSpec::ook(), {Scheme::pam, 4}, {Scheme::qam, 8},
                                          {Scheme::qam_squared, 4}};
  double nt1 = 0.0, k1 = 0.0, awgn = 0.0;
  const auto link = LinkScenario::clear_weather();
  const auto direct = Topology::equidistant(link, 1);
  for (const auto& spec : specs) {
    for (double sigma : {0.05, 0.1368, 0.2183, 0.3744}) {
      for (double db : {-10.0, 0.0, 10.0, 20.0, 30.0}) {
        const double g = db_to_linear(db);
        const double siso = ber_hop_siso(spec, g, 1.3, sigma, rule);
        nt1 = std::max(nt1, rel_diff(ber_hop_miso(spec, g, 1.3, TurbulenceStat::make(sigma, 1, 0.3), rule), siso));
      }
    }
    for (double db : {-10.0, 0.0, 20.0, 40.0, 60.0}) {
      const double hop = ber_hop_siso(spec, db_to_linear(db), 1.0, direct.hops[0].stat.sigma, rule);
      k1 = std::max(k1, rel_diff(system_ber(direct, spec, db), hop));
      for (int n_tx : {1, 2, 3}) {
        const double want = conditional_bep(spec, 1.3 * 1.3 * db_to_linear(db), QMode::chiani);
        const double got = ber_hop_miso(spec, db_to_linear(db), 1.3, TurbulenceStat::make(0.0, n_tx, 0.3), rule);
        awgn = std::max(awgn, rel_diff(got, want));
      }
    }
  }
  int order_violations = 0;
  for (double p : {0.0, 1e-12, 1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.25, 0.4, 0.5}) {
    for (int k = 1; k <= 10; ++k) {
      if (compose_multihop(p, k, Composition::upper_bound) < compose_multihop(p, k, Composition::identical_approx)) {
        ++order_violations;
      }
    }
  }
  o.pass = nt1 <= 1e-15 && k1 <= 1e-15 && awgn <= 1e-15 && order_violations == 0;
  o.note("N_t=1 vs SISO %.1e, K=1 vs hop %.1e, sigma=0 vs AWGN %.1e (limit 1e-15); upper_bound < identical_approx "
         "in %d/100 cases",
         nt1, k1, awgn, order_violations);
  return o;
}

double preset_gain(int figure, const std::string& label) {
  const auto p = figure_preset(figure);
  for (const auto& g : p.gains) {
    if (g.label == label) {
      const auto& base = p.curve(g.baseline);
      return compare_gain(base, p.curve(g.improved), 1e-9);
    }
  }
  throw std::runtime_error("no gain " + label);
}

Outcome gain_check(const std::vector<std::tuple<const char*, int, const char*, double, double>>& claims) {
  Outcome o;
  for (const auto& [what, figure, label, expected, tol] : claims) {
    const double gain = preset_gain(figure, label);
    const bool ok = std::abs(gain - expected) <= tol;
    o.pass = o.pass && ok;
    o.note("%s: %.2f dB (expected %.1f +/- %.1f) %s", what, gain, expected, tol, ok ? "ok" : "out of band");
  }
  return o;
}

// QAM-only figure gains.
Outcome ac4() {
  return gain_check({{"clear, K=3 MISO 8-QAM over K=3 SISO 8-QAM", 7, "k3_miso_over_k3_siso_8qam", 2.6, 0.5},
                     {"fog, K=3 MISO 8-QAM over K=3 SISO 8-QAM", 8, "k3_miso_over_k3_siso_8qam", 1.2, 0.5}});
}

// PAM figure gains (substituted PAM formula, directional).
Outcome ac5() {
  return gain_check({{"clear, dual-hop 4-PAM over direct OOK", 5, "dualhop_siso_4pam_over_siso_ook", 18.0, 3.0},
                     {"fog, K=3 SISO 8-PAM over direct SISO OOK", 8, "k3_siso_8pam_over_siso_ook", 47.5, 4.0},
                     {"fog, K=3 MISO 8-PAM over direct MISO OOK", 8, "k3_miso_8pam_over_miso_ook", 42.8, 4.0}});
}

// Quadrature robustness over every figure curve point.
Outcome ac6() {
  Outcome o;
  double worst_siso = 0.0, worst_miso = 0.0;
  double worst_siso_resolved = 0.0, worst_miso_resolved = 0.0;
  std::string where_siso, where_miso;
  long above = 0, total = 0;
  for (int figure : {5, 6, 7, 8}) {
    for (const auto& curve : figure_preset(figure).curves) {
      const auto& c = curve.config;
      const auto topo = build_topology(c);
      const bool miso = c.n_tx > 1;
      const QuadratureOrders lo = miso ? QuadratureOrders{30, 20} : QuadratureOrders{30, 30};
      const QuadratureOrders hi = miso ? QuadratureOrders{40, 25} : QuadratureOrders{40, 40};
      const int n = static_cast<int>(std::floor((c.sweep.stop_db - c.sweep.start_db) / c.sweep.step_db + 1e-9)) + 1;
      for (int i = 0; i < n; ++i) {
        const double db = c.sweep.start_db + i * c.sweep.step_db;
        const double a = system_ber(topo, c.modulation, db, lo, c.composition);
        const double b = system_ber(topo, c.modulation, db, hi, c.composition);
        const double d = rel_diff(a, b);
        ++total;
        if (d >= 1e-6) ++above;
        double& worst = miso ? worst_miso : worst_siso;
        double& resolved = miso ? worst_miso_resolved : worst_siso_resolved;
        if (d > worst) {
          worst = d;
          char buf[160];
          std::snprintf(buf, sizeof buf, "fig%d %s at %.0f dB (%.3e vs %.3e)", figure, curve.label.c_str(), db, a, b);
          (miso ? where_miso : where_siso) = buf;
        }
        if (std::max(a, b) >= 1e-12) resolved = std::max(resolved, d);
      }
    }
  }
  o.pass = above == 0;
  o.note("%ld/%ld reported BERs move by >= 1e-6 relative", above, total);
  o.note("SISO N=30 vs 40: max %.2e at %s", worst_siso, where_siso.c_str());
  o.note("MISO N=20 vs 25: max %.2e at %s", worst_miso, where_miso.c_str());
  o.note("restricted to BER >= 1e-12: SISO max %.2e, MISO max %.2e", worst_siso_resolved, worst_miso_resolved);
  return o;
}

// Chiani bound property.
Outcome ac7() {
  Outcome o;
  int q_violations = 0;
  double last_violation = -1.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = 10.0 * i / 9999.0;
    if (gaussian_q(x, QMode::chiani) < gaussian_q(x)) {
      ++q_violations;
      last_violation = x;
    }
  }
  int bep_violations = 0, bep_total = 0;
  std::vector<ModulationSpec> specs{ModulationSpec::ook()};
  for (Scheme s : {Scheme::pam, Scheme::qam, Scheme::qam_squared}) {
    for (int m : {2, 4, 8, 16, 64}) specs.emplace_back(s, m);
  }
  for (const auto& spec : specs) {
    for (int i = 0; i < 100; ++i) {
      const double g = i == 0 ? 0.0 : std::pow(10.0, -2.0 + 8.0 * i / 99.0);
      ++bep_total;
      if (conditional_bep(spec, g, QMode::chiani) < conditional_bep(spec, g, QMode::exact)) ++bep_violations;
    }
  }
  o.pass = q_violations == 0 && bep_violations == 0;
  o.note("chiani < Q at %d/10000 grid points on [0, 10] (largest such x = %.4f); chiani BEP < exact BEP at %d/%d "
         "(scheme, gamma) points",
         q_violations, last_violation, bep_violations, bep_total);
  return o;
}

// Determinism across repeated runs and worker counts.
Outcome ac8() {
  Outcome o;
  ScenarioConfig c;
  c.hops = 3;
  c.n_tx = 3;
  c.modulation = ModulationSpec(Scheme::qam, 8);
  c.sweep = {-10.0, 30.0, 2.0};
  c.mc.enabled = true;
  c.mc.samples = 50'000;
  c.mc.seed = 42;
  const int saved = worker_count();
  std::vector<std::string> csv;
  for (int threads : {1, 1, 4, 4, 8, 8}) {
    set_worker_count(threads);
    std::ostringstream out;
    write_csv(out, run_sweep(c));
    csv.push_back(out.str());
  }
  set_worker_count(saved);
  int mismatches = 0;
  for (const auto& s : csv) mismatches += s == csv.front() ? 0 : 1;
  o.pass = mismatches == 0;
  o.note("%zu CSV runs (workers 1, 4, 8, twice each), %d differ from the first; %zu bytes each", csv.size(),
         mismatches, csv.front().size());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 parameter anchors", ac1},
      {"AC2 SISO closed forms vs integration and MC", ac2},
      {"AC3 reduction lattice", ac3},
      {"AC4 QAM figure gains", ac4},
      {"AC5 PAM figure gains (substituted formula)", ac5},
      {"AC6 quadrature robustness", ac6},
      {"AC7 chiani bound property", ac7},
      {"AC8 determinism", ac8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.emplace_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, secs);
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria failed\n", failed, criteria.size());
  return failed;
}
