#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pca/cftp.hpp"
#include "pca/exact.hpp"
#include "pca/models.hpp"

using namespace pca;

TEST_CASE("transition matrix agrees with pairwise enumeration") {
  for (const LocalRule& rule : {models::noisy_xor(0.2), models::majority(0.3), models::chma10()}) {
    const TransitionMatrix q = transition_matrix(rule, 4);
    const auto ref = oracle::ring_matrix(rule, 4);
    for (std::size_t x = 0; x < q.states(); ++x)
      for (std::size_t y = 0; y < q.states(); ++y) CHECK(std::abs(q(x, y) - ref[x][y]) <= 1e-15);
  }
}

TEST_CASE("rows are stochastic for every zoo model, n <= 10") {
  for (const auto& spec : zoo())
    for (Cell n : {1, 5, 10}) {
      const TransitionMatrix q = transition_matrix(spec.make(0.35), n);
      for (std::size_t x = 0; x < q.states(); ++x) CHECK(std::abs(q.matrix().row(x).sum() - 1.0) <= 1e-12);
    }
}

TEST_CASE("dense guard") { CHECK_THROWS_AS(transition_matrix(models::noisy_xor(0.2), 15), StateSpaceGuard); }

TEST_CASE("noisy XOR(0.2), ring 3: closed-form oracle and power iteration") {
  const TransitionMatrix q = transition_matrix(models::noisy_xor(0.2), 3);
  const StationaryReport rep = stationary(q);
  REQUIRE(rep.unique());
  CHECK(rep.ergodic);
  CHECK(rep.residual <= 1e-10);
  const auto ref = oracle::lazy_power(oracle::ring_matrix(models::noisy_xor(0.2), 3), 400);
  const auto pow = stationary_power(q, 2000);
  for (std::size_t s = 0; s < 8; ++s) {
    CHECK(rep.distributions[0][s] == doctest::Approx(ref[s]).epsilon(1e-9));
    CHECK(pow[s] == doctest::Approx(ref[s]).epsilon(1e-3));
  }
  // Even-weight and odd-weight states carry 0.152 and 0.098 (frozen from the oracle).
  CHECK(rep.distributions[0][0] == doctest::Approx(0.152));
  CHECK(rep.distributions[0][1] == doctest::Approx(0.098));
}

TEST_CASE("Majority: even ring is a period-2 pair, odd ring is ergodic") {
  const TransitionMatrix q4 = transition_matrix(models::majority(0.5), 4);
  const StationaryReport r4 = stationary(q4);
  REQUIRE(r4.unique());
  CHECK_FALSE(r4.ergodic);
  CHECK(r4.periods[0] == 2);
  CHECK(r4.distributions[0][q4.encode(std::vector<Letter>{0, 1, 0, 1})] == doctest::Approx(0.5));
  CHECK(r4.distributions[0][q4.encode(std::vector<Letter>{1, 0, 1, 0})] == doctest::Approx(0.5));

  const TransitionMatrix q3 = transition_matrix(models::majority(0.5), 3);
  const StationaryReport r3 = stationary(q3);
  REQUIRE(r3.unique());
  CHECK(r3.ergodic);
  const auto ref = oracle::lazy_power(oracle::ring_matrix(models::majority(0.5), 3), 2000);
  for (std::size_t s = 0; s < 8; ++s) {
    CHECK(r3.distributions[0][s] > 0.0);
    CHECK(r3.distributions[0][s] == doctest::Approx(ref[s]).epsilon(1e-8));
  }
}

TEST_CASE("constant rule gives the product measure") {
  const TransitionMatrix q = transition_matrix(models::constant(2, {0}, {0.3, 0.7}), 3);
  const auto pi = stationary(q).distributions[0];
  for (std::size_t s = 0; s < 8; ++s) {
    const auto c = q.decode(s);
    double p = 1.0;
    for (Letter a : c) p *= a ? 0.7 : 0.3;
    CHECK(pi[s] == doctest::Approx(p));
  }
}

TEST_CASE("FINAE has two absorbing states") {
  const StationaryReport r = stationary(transition_matrix(models::finae(0.5), 4));
  CHECK(r.distributions.size() == 2);
  CHECK_FALSE(r.ergodic);
}

TEST_CASE("parity statement and flip conjugacy") {
  CHECK(verify_parity_theorem(0.5, 4));
  CHECK(verify_parity_theorem(0.3, 5));
  CHECK(verify_parity_theorem(0.5, 6));
  CHECK(verify_flip_conjugacy(0.4, 4));
  CHECK(verify_flip_conjugacy(0.7, 6));
  CHECK_THROWS_AS(verify_flip_conjugacy(0.4, 5), ParityError);
}

TEST_CASE("stationary CSV") {
  const TransitionMatrix q = transition_matrix(models::noisy_xor(0.2), 2);
  const auto csv = stationary_csv(q, stationary(q).distributions[0]);
  CHECK(csv.rfind("state,configuration,probability\n0,00,", 0) == 0);
}

TEST_CASE("single-row and point-mass rows") {
  const LocalRule id = models::constant(2, {0}, {0.25, 0.75});
  const TransitionMatrix q1 = transition_matrix(id, 1);
  CHECK(q1(0, 1) == 0.75);
  CHECK(q1(1, 0) == 0.25);
  const TransitionMatrix q4 = transition_matrix(models::majority(0.5), 4);
  CHECK(q4(q4.encode(std::vector<Letter>{0, 1, 0, 1}), q4.encode(std::vector<Letter>{1, 0, 1, 0})) == 1.0);
}

TEST_CASE("noisy XOR(0.2), ring 3: entries match Monte Carlo transition frequencies") {
  const LocalRule x = models::noisy_xor(0.2);
  const TransitionMatrix q = transition_matrix(x, 3);
  const auto d = simulate(x, ring_configuration("000"), 100000, 13);
  std::vector<std::vector<double>> count(8, std::vector<double>(8, 0.0));
  std::vector<double> from(8, 0.0);
  for (std::size_t t = 0; t + 1 < d.rows.size(); ++t) {
    const std::size_t a = q.encode(d.rows[t].letters), b = q.encode(d.rows[t + 1].letters);
    count[a][b] += 1;
    from[a] += 1;
  }
  for (std::size_t a = 0; a < 8; ++a) {
    REQUIRE(from[a] > 1000);
    for (std::size_t b = 0; b < 8; ++b) {
      const double p = q(a, b), se = std::sqrt(p * (1 - p) / from[a]);
      CHECK(std::abs(count[a][b] / from[a] - p) <= 4 * se + 1e-12);
    }
  }
}
