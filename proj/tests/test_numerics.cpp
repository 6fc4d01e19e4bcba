#include "fso/error.hpp"
#include "fso/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fso;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

// Integral of x^k exp(-x^2) over the real line: Gamma((k+1)/2) for even k.
double hermite_moment(int k) { return k % 2 ? 0.0 : std::tgamma((k + 1) / 2.0); }

}  // namespace

TEST_CASE("known low-order rules") {
  const auto r1 = gauss_hermite_rule(1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(kSqrtPi).epsilon(1e-15));

  const auto r2 = gauss_hermite_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::numbers::sqrt2).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(kSqrtPi / 2).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(kSqrtPi / 2).epsilon(1e-15));
}

TEST_CASE("rule invariants for every order") {
  for (int n = 1; n <= kMaxQuadratureOrder; ++n) {
    const auto r = gauss_hermite_rule(n);
    CHECK(r.order == n);
    double sum = 0.0, second = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(r.weights[i] > 0.0);
      CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
      if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
      sum += r.weights[i];
      second += r.weights[i] * r.nodes[i] * r.nodes[i];
    }
    CHECK(std::abs(sum - kSqrtPi) <= 1e-12);
    if (n >= 2) CHECK(std::abs(second - kSqrtPi / 2) <= 1e-10);
  }
}

TEST_CASE("fourth moment at order 30") {
  const auto r = gauss_hermite_rule(30);
  double m4 = 0.0;
  for (int i = 0; i < 30; ++i) m4 += r.weights[i] * std::pow(r.nodes[i], 4);
  CHECK(std::abs(m4 - 0.75 * kSqrtPi) <= 1e-9);
}

TEST_CASE("exact for polynomials up to degree 2N-1") {
  for (int n : {5, 10, 20}) {
    const auto r = gauss_hermite_rule(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double acc = 0.0, scale = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += r.weights[i] * std::pow(r.nodes[i], k);
        scale += std::abs(r.weights[i] * std::pow(r.nodes[i], k));
      }
      const double exact = hermite_moment(k);
      if (exact == 0.0) {
        CHECK(std::abs(acc) <= 1e-14 * scale);
      } else {
        CHECK(acc == doctest::Approx(exact).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("tail weights keep relative precision") {
  // Largest node/weight of the order-64 rule (reference: 50-digit evaluation).
  const auto r = gauss_hermite_rule(64);
  CHECK(r.nodes.back() == doctest::Approx(10.526123167960545).epsilon(1e-13));
  CHECK(r.weights.back() == doctest::Approx(5.535706535856942e-49).epsilon(1e-10));
}

TEST_CASE("order out of range") {
  CHECK_THROWS_AS(gauss_hermite_rule(0), DomainError);
  CHECK_THROWS_AS(gauss_hermite_rule(65), DomainError);
  CHECK_THROWS_AS(cached_gauss_hermite_rule(-3), DomainError);
  CHECK(&cached_gauss_hermite_rule(30) == &cached_gauss_hermite_rule(30));
  CHECK(cached_gauss_hermite_rule(30).nodes == gauss_hermite_rule(30).nodes);
}

TEST_CASE("symmetric matrix square root") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK((symmetric_matrix_sqrt(id) - id).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const auto sd = symmetric_matrix_sqrt(d);
  CHECK(sd(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sd(1, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(sd(0, 1) == 0.0);
  // Idempotent on diagonal input: sqrt(sqrt(D)^2) == sqrt(D).
  CHECK((symmetric_matrix_sqrt(sd * sd) - sd).cwiseAbs().maxCoeff() <= 1e-15);

  Eigen::MatrixXd g(2, 2);
  g << 0.04, 0.012, 0.012, 0.04;
  const auto s = symmetric_matrix_sqrt(g);
  CHECK((s * s - g).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  CHECK(es.eigenvalues().minCoeff() >= 0.0);

  SUBCASE("tiny negative eigenvalues are clamped") {
    Eigen::MatrixXd rank1 = Eigen::MatrixXd::Constant(3, 3, 0.25);  // rho = 1
    const auto r = symmetric_matrix_sqrt(rank1);
    CHECK((r * r - rank1).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("errors") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.4, 1.0;
    CHECK_THROWS_AS(symmetric_matrix_sqrt(asym), FactorizationError);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(symmetric_matrix_sqrt(indefinite), FactorizationError);
  }
}
