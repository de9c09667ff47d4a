#include "spectral/transport.hpp"
#include "spectral/paperlab.hpp"
#include "spectral/rng.hpp"

#include <doctest.h>

#include "oracle.hpp"

#include <cmath>

using namespace spectral;

namespace {

void check_marginals(const TransportPlan& plan, double tol = 1e-10) {
  const RealVector row = plan.pi.rowwise().sum();
  const RealVector col = plan.pi.colwise().sum();
  CHECK((row - plan.mu).cwiseAbs().maxCoeff() <= tol);
  CHECK((col - plan.nu).cwiseAbs().maxCoeff() <= tol);
  CHECK(plan.pi.minCoeff() >= 0.0);
}

CostMatrix random_metric_cost(int n, Rng& rng) {
  RealMatrix pts(n, 3);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) pts(i, k) = rng.gaussian();
  RealMatrix c = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      c(i, j) = c(j, i) = (pts.row(i) - pts.row(j)).norm();
  return CostMatrix(c);
}

RealVector random_marginal(int n, Rng& rng) {
  RealVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.exponential();
  return v / v.sum();
}

}  // namespace

TEST_CASE("three-point transport with known value") {
  RealMatrix c(3, 3);
  const double r2 = std::sqrt(2.0);
  c << 0, r2, 1, r2, 0, 1, 1, 1, 0;
  RealVector mu(3), nu(3);
  mu << 0.5, 0.3, 0.2;
  nu << 0.2, 0.1, 0.7;
  const CostMatrix cost(c);
  const auto res = wasserstein_primal(cost, mu, nu);
  CHECK(res.value == doctest::Approx(0.5).epsilon(1e-12));
  check_marginals(res.plan);
  CHECK(res.value ==
        doctest::Approx(oracle::vertex_transport(cost.entries(), mu, nu)).epsilon(1e-12));
}

TEST_CASE("primal matches basis enumeration on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);  // 2..4
    const CostMatrix cost = random_metric_cost(m, rng);
    const RealVector mu = random_marginal(m, rng);
    const RealVector nu = random_marginal(m, rng);
    const auto res = wasserstein_primal(cost, mu, nu);
    const double ref = oracle::vertex_transport(cost.entries(), mu, nu);
    CHECK(res.value == doctest::Approx(ref).epsilon(1e-10));
    check_marginals(res.plan);
  }
}

TEST_CASE("degenerate marginals") {
  Rng rng(32);
  const CostMatrix cost = random_metric_cost(4, rng);
  const RealVector mu = random_marginal(4, rng);
  CHECK(wasserstein_primal(cost, mu, mu).value == doctest::Approx(0.0));

  RealVector a = RealVector::Zero(4), b = RealVector::Zero(4);
  a(1) = 1.0;
  b(3) = 1.0;
  CHECK(wasserstein_primal(cost, a, b).value == doctest::Approx(cost(1, 3)));

  // a zero weight in the middle of the support
  RealVector mu0(4), nu0(4);
  mu0 << 0.5, 0.0, 0.3, 0.2;
  nu0 << 0.1, 0.4, 0.0, 0.5;
  const auto res = wasserstein_primal(cost, mu0, nu0);
  CHECK(res.value ==
        doctest::Approx(oracle::vertex_transport(cost.entries(), mu0, nu0)).epsilon(1e-10));
  check_marginals(res.plan);
}

TEST_CASE("input validation") {
  Rng rng(33);
  const CostMatrix cost = random_metric_cost(3, rng);
  RealVector mu(3), short_nu(2);
  mu << 0.2, 0.3, 0.5;
  short_nu << 0.5, 0.5;
  CHECK_THROWS_AS(wasserstein_primal(cost, mu, short_nu), std::domain_error);
  RealVector bad(3);
  bad << 0.5, 0.6, 0.1;
  CHECK_THROWS_AS(wasserstein_primal(cost, mu, bad), std::domain_error);
  bad << -0.2, 0.7, 0.5;
  CHECK_THROWS_AS(wasserstein_primal(cost, bad, mu), std::domain_error);
}

TEST_CASE("infinite costs: feasible reroutes or an infinite value") {
  // points 1-2 and 1-3 disconnected, 2-3 at distance 1
  RealMatrix c(3, 3);
  const double inf = std::numeric_limits<double>::infinity();
  c << 0, inf, inf, inf, 0, 1, inf, 1, 0;
  const CostMatrix cost(c);

  RealVector mu(3), nu(3);
  mu << 0.5, 0.3, 0.2;
  nu << 0.5, 0.1, 0.4;  // same mass on the disconnected point
  const auto fin = wasserstein_primal(cost, mu, nu);
  CHECK(fin.value == doctest::Approx(0.2).epsilon(1e-12));
  check_marginals(fin.plan);
  CHECK(fin.plan.pi(0, 1) + fin.plan.pi(0, 2) + fin.plan.pi(1, 0) + fin.plan.pi(2, 0) <=
        1e-12);

  nu << 0.6, 0.1, 0.3;  // mass must cross a disconnected edge
  const auto res = wasserstein_primal(cost, mu, nu);
  CHECK(std::isinf(res.value));
  CHECK(std::isinf(oracle::vertex_transport(cost.entries(), mu, nu)));
}

TEST_CASE("dual equals primal and the potential is 1-Lipschitz") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 3 + static_cast<int>(rng.next_u64() % 4);  // 3..6
    const CostMatrix cost = random_metric_cost(m, rng);
    const RealVector mu = random_marginal(m, rng);
    const RealVector nu = random_marginal(m, rng);
    const auto primal = wasserstein_primal(cost, mu, nu);
    const auto dual = kantorovich_dual(cost, mu, nu);
    CHECK(std::abs(primal.value - dual.value) <= 1e-9);
    const RealVector& f = dual.potential.f;
    CHECK(f.minCoeff() == doctest::Approx(0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) CHECK(f(i) - f(j) <= cost(i, j) + 1e-10);
    CHECK(f.dot(mu - nu) == doctest::Approx(dual.value).epsilon(1e-12));
  }
}

TEST_CASE("dual refuses infinite costs") {
  RealMatrix c(2, 2);
  c << 0, std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(), 0;
  RealVector mu(2), nu(2);
  mu << 0.5, 0.5;
  nu << 0.5, 0.5;
  CHECK_THROWS_AS(kantorovich_dual(CostMatrix{c}, mu, nu), std::invalid_argument);
}

TEST_CASE("spectral_wasserstein on the three-point triple") {
  const auto triple = c3_triple({1.0, 2.0});
  const auto phi = State::probability({0.3, 0.5, 0.2});
  const auto psi = State::probability({0.1, 0.2, 0.7});
  // W = |0.2|/1 + |0.3|/2
  const auto res = spectral_wasserstein(triple, phi, psi);
  CHECK(res.value == doctest::Approx(0.35).epsilon(1e-6));
  check_marginals(res.plan, 1e-9);
  REQUIRE(res.potential.has_value());

  const auto disc = c3_triple_alpha_zero(1.0);
  const auto inf_res = spectral_wasserstein(disc, pure_state(disc, 0), pure_state(disc, 1));
  CHECK(std::isinf(inf_res.value));
  CHECK_FALSE(inf_res.potential.has_value());
}
