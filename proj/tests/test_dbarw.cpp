#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pca/dbarw.hpp"
#include "pca/models.hpp"
#include "pca/noise.hpp"

using namespace pca;

TEST_CASE("DBARW parameters") {
  CHECK_NOTHROW(DbarwParams(2.0 / 3.0));
  CHECK_THROWS_AS(DbarwParams(0.7), ParamRange);
  CHECK_THROWS_AS(DbarwParams(0.0), ParamRange);
}

TEST_CASE("DBARW moves") {
  const DbarwParams p(0.5);
  CHECK(dbarw_move(p, 0.1) == DbarwMove::Left);
  CHECK(dbarw_move(p, 0.3) == DbarwMove::Right);
  CHECK(dbarw_move(p, 0.6) == DbarwMove::Branch);
  CHECK(dbarw_move(p, 0.8) == DbarwMove::Stay);

  const ParticleState none;
  CHECK(dbarw_step(none, p, std::vector<double>{}).empty());
  const ParticleState one{{4}};
  CHECK(dbarw_step(one, p, std::vector<double>{0.6}).occupied == std::vector<Cell>{3, 4, 5});
  // Particles at 0 and 2 meeting at 1 annihilate.
  const ParticleState two{{0, 2}};
  CHECK(dbarw_step(two, p, std::vector<double>{0.3, 0.1}).empty());
  // Branch at 0 and a left move from 2: site 1 holds two particles.
  CHECK(dbarw_step(two, p, std::vector<double>{0.6, 0.1}).occupied == std::vector<Cell>{-1, 0});
}

TEST_CASE("particle parity is conserved") {
  const DbarwParams p(0.6);
  ParticleState s = ParticleState::from_positions({0, 1, 5});
  for (Time t = 0; t < 2000; ++t) {
    const std::size_t before = s.size();
    s = dbarw_step(s, p, NoiseRow(3, t));
    CHECK(s.size() % 2 == before % 2);
    if (s.empty()) s = ParticleState::from_positions({t % 7});
  }
}

TEST_CASE("time zero values are exact") {
  const std::vector<Cell> a{0};
  CHECK(finae_two_point(0.5, a, 0, 1, 0, 100, 1).estimate == 1.0);
  const std::vector<Cell> a2{0, 1};
  CHECK(finae_two_point(0.5, a2, 0, 1, 0, 100, 1).estimate == 0.0);
  CHECK(dbarw_parity(0.5, 0, 1, a, 0, 100, 1).estimate == 1.0);
  const std::vector<Cell> far{7};
  CHECK(dbarw_parity(0.5, 0, 1, far, 0, 100, 1).estimate == 0.0);
  const auto r = duality_check(0.5, a, 0, 1, 0, 100, 1);
  CHECK(r.finae.estimate == r.parity.estimate);
}

TEST_CASE("one-step enumeration oracle") {
  const std::vector<Cell> a{0};
  CHECK(oracle::finae_one_step(0.5, a, 0, 1) == doctest::Approx(0.5));
  CHECK(oracle::dbarw_one_step(0.5, a, 0, 1) == doctest::Approx(0.5));
  for (double alpha : {0.2, 0.4, 0.6})
    for (const std::vector<Cell>& set : {std::vector<Cell>{0}, std::vector<Cell>{-1, 0, 1}, std::vector<Cell>{0, 2}})
      CHECK(oracle::finae_one_step(alpha, set, 0, 1) == doctest::Approx(oracle::dbarw_one_step(alpha, set, 0, 1)));
  // The rule table gives the same one-step law as the arc construction.
  const std::vector<Cell> set{0, 2};
  const double alpha = 0.4;
  const auto est = finae_two_point(alpha, set, 0, 1, 1, 100000, 5);
  const double exact = oracle::finae_one_step(alpha, set, 0, 1);
  CHECK(std::abs(est.estimate - exact) <= 3 * std::sqrt(exact * (1 - exact) / 1e5));
}

TEST_CASE("duality report CSV") {
  const std::vector<Cell> a{-1, 0, 1};
  const auto r = duality_check(0.5, a, 0, 1, 3, 20000, 2);
  CHECK(r.overlap);
  CHECK(r.inequality);
  CHECK(r.csv().rfind("side,estimate,ci_low,ci_high\nfinae,", 0) == 0);
  CHECK_THROWS_AS(duality_check(0.8, a, 0, 1, 3, 10, 2), ParamRange);
}
