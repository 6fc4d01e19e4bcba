#include "fso/ber_engine.hpp"
#include "fso/error.hpp"
#include "fso/montecarlo.hpp"
#include "fso/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace fso;

TEST_CASE("gain samples") {
  SUBCASE("sigma = 0 gives unit gains") {
    const auto h = sample_channel_gains(TurbulenceStat::make(0.0, 3, 0.3), 1000, 5);
    CHECK((h.array() == 1.0).all());
  }
  SUBCASE("unit mean and branch correlation") {
    const double sigma = 0.3744;
    const auto stat = TurbulenceStat::make(sigma, 2, 0.3);
    const std::uint64_t n = 1'000'000;
    const auto h = sample_channel_gains(stat, n, 11);
    const double sd_h = std::sqrt(std::exp(4 * sigma * sigma) - 1.0);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(h.col(j).mean() - 1.0) <= 4 * sd_h / std::sqrt(double(n)));

    const Eigen::ArrayXd l1 = h.col(0).array().log();
    const Eigen::ArrayXd l2 = h.col(1).array().log();
    const double m1 = l1.mean(), m2 = l2.mean();
    const double cov = ((l1 - m1) * (l2 - m2)).mean();
    const double corr = cov / std::sqrt((l1 - m1).square().mean() * (l2 - m2).square().mean());
    CHECK(std::abs(corr - 0.3) <= 0.02);
    // ln h = 2Y with Y ~ N(-sigma^2, sigma^2).
    CHECK(m1 == doctest::Approx(-2 * sigma * sigma).epsilon(0.01));
  }
  SUBCASE("fixed seed, fixed output") {
    const auto stat = TurbulenceStat::make(0.2, 3, 0.3);
    CHECK(sample_channel_gains(stat, 50'000, 3) == sample_channel_gains(stat, 50'000, 3));
    CHECK(sample_channel_gains(stat, 50'000, 3) != sample_channel_gains(stat, 50'000, 4));
  }
}

TEST_CASE("semi-analytic estimate brackets the closed form") {
  // Absolute fog path loss over the full link.
  const auto fog = LinkScenario::light_fog();
  const double beta = path_loss(fog, fog.link_distance_m);
  const double sigma = std::sqrt(rytov_variance(fog, fog.link_distance_m));
  CHECK(sigma == doctest::Approx(0.2183).epsilon(1e-3));
  McOptions opt;
  opt.samples = 1'000'000;
  opt.seed = 2024;
  opt.kernel = QMode::chiani;
  const double g = db_to_linear(40.0);
  const auto est = semi_analytic_hop(ModulationSpec::ook(), g, beta, TurbulenceStat::make(sigma), opt);
  const double closed = ber_hop_siso(ModulationSpec::ook(), g, beta, sigma, cached_gauss_hermite_rule(64));
  CHECK(est.samples == 1'000'000);
  CHECK(est.halfwidth_95 > 0.0);
  CHECK(std::abs(est.mean - closed) <= est.halfwidth_95);
}

TEST_CASE("sigma = 0 estimate is the conditional BEP") {
  const ModulationSpec qam8(Scheme::qam, 8);
  McOptions opt;
  opt.samples = 20'000;
  const auto est = semi_analytic_hop(qam8, 50.0, 1.2, TurbulenceStat::make(0.0, 2, 0.3), opt);
  CHECK(est.mean == doctest::Approx(conditional_bep(qam8, 1.44 * 50.0)).epsilon(1e-14));
  CHECK(est.halfwidth_95 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("MISO estimate sits above the closed-form lower envelope") {
  const auto stat = TurbulenceStat::make(0.3744, 2, 0.3);
  McOptions opt;
  opt.samples = 1'000'000;
  opt.kernel = QMode::chiani;
  for (double db : {10.0, 20.0, 30.0}) {
    const double g = db_to_linear(db);
    const auto est = semi_analytic_hop(ModulationSpec::ook(), g, 1.0, stat, opt);
    const double closed = ber_hop_miso(ModulationSpec::ook(), g, 1.0, stat, cached_gauss_hermite_rule(30));
    CHECK(est.mean >= closed - 3 * est.halfwidth_95);
  }
}

TEST_CASE("multi-hop estimate composes per-hop means") {
  const auto link = LinkScenario::clear_weather();
  const auto topo = Topology::equidistant(link, 3);
  const ModulationSpec qam8(Scheme::qam, 8);
  McOptions opt;
  opt.samples = 100'000;
  opt.kernel = QMode::chiani;
  const auto whole = semi_analytic_ber(topo, qam8, 0.0, opt);
  const auto hop = semi_analytic_hop(qam8, 1.0, topo.hops[0].beta, topo.hops[0].stat, opt);
  CHECK(whole.mean == doctest::Approx(compose_multihop(hop.mean, 3, Composition::identical_approx)).epsilon(1e-14));
  CHECK(whole.halfwidth_95 > hop.halfwidth_95);
  const double closed = system_ber(topo, qam8, 0.0);
  CHECK(std::abs(whole.mean - closed) <= 1.5 * whole.halfwidth_95);
}

TEST_CASE("parallel chunks match the serial reference and ignore the worker count") {
  const ModulationSpec pam4(Scheme::pam, 4);
  const auto stat = TurbulenceStat::make(0.3, 3, 0.3);
  McOptions opt;
  opt.samples = 100'003;  // ragged last chunk
  opt.seed = 99;
  const auto serial = reference::semi_analytic_hop(pam4, 300.0, 2.0, stat, opt.samples, opt.seed, opt.kernel);
  const int saved = worker_count();
  std::vector<McEstimate> runs;
  for (int threads : {1, 4, 8}) {
    set_worker_count(threads);
    runs.push_back(semi_analytic_hop(pam4, 300.0, 2.0, stat, opt));
  }
  set_worker_count(saved);
  for (const auto& r : runs) {
    CHECK(r.mean == runs[0].mean);
    CHECK(r.halfwidth_95 == runs[0].halfwidth_95);
    CHECK(r.samples == runs[0].samples);
  }
  CHECK(runs[0].mean == doctest::Approx(serial.mean).epsilon(1e-13));
  CHECK(runs[0].halfwidth_95 == doctest::Approx(serial.halfwidth_95).epsilon(1e-10));
}

TEST_CASE("target relative error adds rounds") {
  const auto stat = TurbulenceStat::make(0.2183, 1, 0.0);
  McOptions opt;
  opt.samples = 16'384;
  opt.target_relative_error = 0.01;
  opt.max_samples = 2'000'000;
  const auto est = semi_analytic_hop(ModulationSpec::ook(), 30.0, 1.0, stat, opt);
  CHECK(est.samples > opt.samples);
  CHECK(est.samples % opt.samples == 0);
  CHECK((est.halfwidth_95 / est.mean <= 0.01 || est.samples + opt.samples > opt.max_samples));
  CHECK(est.samples <= opt.max_samples);
}

TEST_CASE("bit-level OOK") {
  SUBCASE("AWGN at BER 1e-3") {
    // Q(sqrt(g/2)) = 1e-3 at sqrt(g/2) = 3.090232306167814.
    const double g = 2.0 * 3.090232306167814 * 3.090232306167814;
    const auto est = bitlevel_ook_ber(10.0 * std::log10(g), TurbulenceStat::make(0.0), 1.0, 10'000'000, 7);
    const double sd = std::sqrt(1e-3 * (1 - 1e-3) / 1e7);
    CHECK(std::abs(est.mean - 1e-3) <= 3 * sd);
  }
  SUBCASE("zero SNR is a coin flip") {
    const auto est = bitlevel_ook_ber(-std::numeric_limits<double>::infinity(), TurbulenceStat::make(0.2), 1.0,
                                      1'000'000, 3);
    CHECK(std::abs(est.mean - 0.5) <= est.halfwidth_95);
  }
  SUBCASE("agrees with the semi-analytic exact-Q average under fading") {
    const auto stat = TurbulenceStat::make(0.2183);
    const auto bits = bitlevel_ook_ber(12.0, stat, 1.0, 4'000'000, 5);
    McOptions opt;
    opt.samples = 1'000'000;
    const auto semi = semi_analytic_hop(ModulationSpec::ook(), db_to_linear(12.0), 1.0, stat, opt);
    CHECK(std::abs(bits.mean - semi.mean) <= bits.halfwidth_95 + semi.halfwidth_95);
  }
  SUBCASE("worker count does not change the count") {
    const int saved = worker_count();
    set_worker_count(1);
    const auto a = bitlevel_ook_ber(10.0, TurbulenceStat::make(0.3), 1.0, 200'000, 1);
    set_worker_count(8);
    const auto b = bitlevel_ook_ber(10.0, TurbulenceStat::make(0.3), 1.0, 200'000, 1);
    set_worker_count(saved);
    CHECK(a.mean == b.mean);
  }
}

TEST_CASE("Monte Carlo input errors") {
  McOptions few;
  few.samples = 100;
  CHECK_THROWS_AS(semi_analytic_hop(ModulationSpec::ook(), 1.0, 1.0, TurbulenceStat::make(0.1), few),
                  DomainError);
  CHECK_THROWS_AS(bitlevel_ook_ber(10.0, TurbulenceStat::make(0.1), 1.0, 1000, 1), DomainError);
  CHECK_THROWS_AS(bitlevel_ook_ber(10.0, TurbulenceStat::make(0.1, 2, 0.3), 1.0, 200'000, 1), DomainError);
  CHECK_THROWS_AS(sample_channel_gains(TurbulenceStat::make(0.1), 0, 1), DomainError);
}
