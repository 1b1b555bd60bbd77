#include <doctest.h>

#include <array>
#include <cmath>

#include "pca/core.hpp"
#include "pca/models.hpp"
#include "pca/noise.hpp"

using namespace pca;

TEST_CASE("validate_rule accepts shipped tables and names the bad row") {
  CHECK_NOTHROW(validate_rule(models::majority(0.5)));
  CHECK_THROWS_AS(validate_rule(2, 1, {{1.0, 0.0}, {0.5, 0.6}}), RuleInvalid);
  CHECK_THROWS_AS(validate_rule(2, 1, {{1.2, -0.2}, {0.5, 0.5}}), RuleInvalid);
  CHECK_THROWS_AS(validate_rule(2, 1, {{1.0, 0.0}}), RuleInvalid);
  try {
    LocalRule(2, {0}, {{1.0, 0.0}, {0.5, 0.6}});
    FAIL("expected RuleInvalid");
  } catch (const RuleInvalid& e) {
    CHECK(e.row() == 1);
  }
  CHECK_THROWS_AS(LocalRule(2, {0}, {{1.0, 0.0}, {NAN, 1.0}}), RuleInvalid);
}

TEST_CASE("neighborhoods must be distinct") {
  CHECK_THROWS(Neighborhood({0, 0}));
  CHECK_THROWS(Neighborhood({}));
  CHECK(Neighborhood({-1, 0, 1}).min_offset() == -1);
}

TEST_CASE("local_distribution examples") {
  const std::array<Letter, 3> w010{0, 1, 0};
  const auto m = local_distribution(models::majority(0.3), w010);
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.0);
  const std::array<Letter, 2> w01{0, 1};
  const auto x = local_distribution(models::noisy_xor(0.2), w01);
  CHECK(x[0] == doctest::Approx(0.2));
  CHECK(x[1] == doctest::Approx(0.8));
  const std::array<Letter, 2> w11{1, 1};
  const auto s = local_distribution(models::stavskaya(0.6), w11);
  CHECK(s[0] == doctest::Approx(0.4));
  CHECK(s[1] == doctest::Approx(0.6));
}

TEST_CASE("update_cell examples") {
  const std::array<Letter, 3> w010{0, 1, 0};
  for (double a : {0.1, 0.5, 0.9})
    for (double r : {0.0, 0.3, 0.999999})
      CHECK(update_cell(models::majority(a), w010, r) == 0);
  const std::array<Letter, 2> w11{1, 1};
  CHECK(update_cell(models::noisy_xor(0.0), w11, 0.7) == 0);
  CHECK(update_cell(models::stavskaya(0.6), w11, 0.5) == 1);
  CHECK(update_cell(models::stavskaya(0.6), w11, 0.39) == 0);
  // Half-open intervals: r equal to the cutoff selects the next letter.
  CHECK(update_cell(models::stavskaya(0.5), w11, 0.5) == 1);
}

TEST_CASE("zero-probability letters are never selected") {
  const LocalRule r(3, {0}, {{0.5, 0.5, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  const std::array<Letter, 1> w0{0};
  CHECK(update_cell(r, w0, std::nextafter(1.0, 0.0)) == 1);
  const std::array<Letter, 1> w1{1};
  CHECK(update_cell(r, w1, 0.0) == 1);
}

TEST_CASE("deterministic rules ignore r") {
  std::vector<std::vector<double>> rows;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      std::vector<double> row(3, 0.0);
      row[(x + y) % 3] = 1.0;
      rows.push_back(row);
    }
  for (const LocalRule& rule : {models::noisy_xor(0.0), LocalRule(3, {0, 1}, rows)}) {
    REQUIRE(rule.is_deterministic());
    for (std::size_t row = 0; row < rule.num_rows(); ++row) {
      const auto w = rule.decode(row);
      const Letter a = update_cell(rule, w, 0.0);
      CHECK(update_cell(rule, w, 0.5) == a);
      CHECK(update_cell(rule, w, std::nextafter(1.0, 0.0)) == a);
    }
  }
}

TEST_CASE("update_cell frequencies match local_distribution") {
  const LocalRule rule = models::noisy_xor(0.2);
  const NoiseField noise(7);
  for (std::size_t row = 0; row < rule.num_rows(); ++row) {
    const auto w = rule.decode(row);
    const auto p = local_distribution(rule, w);
    std::array<int, 2> count{0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++count[update_cell(rule, w, noise(static_cast<Time>(row), i))];
    for (int a = 0; a < 2; ++a) {
      const double se = std::sqrt(p[a] * (1 - p[a]) / n);
      CHECK(std::abs(count[a] / double(n) - p[a]) <= 3 * se + 1e-12);
    }
  }
}

TEST_CASE("row encoding puts the first offset first") {
  const LocalRule r = models::majority(0.5);
  const std::array<Letter, 3> w{1, 0, 0};
  CHECK(r.encode(w) == 4);
  CHECK(r.decode(6) == std::vector<Letter>{1, 1, 0});
}

TEST_CASE("uniform noise: frozen vectors, purity and mean") {
  struct V {
    std::uint64_t seed;
    Time t;
    Cell k;
    double value;
  };
  const V vectors[] = {
      {0ULL, 0, 0, 0.25530699983033389},
      {1ULL, 0, 0, 0.63778154970883871},
      {1ULL, -1, 0, 0.25542120016211101},
      {1ULL, 0, 1, 0.68765772083231358},
      {42ULL, -7, 3, 0.38464754388948197},
      {2024ULL, -1000, -5, 0.78641627070682851},
      {3735928559ULL, 123456, -987654, 0.95577542996391929},
  };
  for (const auto& v : vectors) {
    CHECK(uniform_at(v.seed, v.t, v.k) == v.value);
    CHECK(uniform_at(v.seed, v.t, v.k) == uniform_at(v.seed, v.t, v.k));
    CHECK(uniform_at(v.seed, v.t, v.k) != uniform_at(v.seed, v.t, v.k + 1));
  }
  CHECK(derive_seed(1, 0) == 1691163489314553700ULL);

  double sum = 0.0;
  const int n = 1000000;
  const NoiseRow row(99, -3);
  for (int k = 0; k < n; ++k) {
    const double u = row(k);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.002);
}

TEST_CASE("step examples") {
  const Configuration zeros = ring_configuration("000000");
  const std::vector<double> noise(6, 0.42);
  CHECK(step(models::noisy_xor(0.0), zeros, noise) == zeros);
  // Majority on 0101: every cell sees 010 or 101, both deterministic flips.
  const Configuration alt = ring_configuration("0101");
  for (double r : {0.0, 0.5, 0.99}) {
    const std::vector<double> u(4, r);
    CHECK(to_string(step(models::majority(0.5), alt, u)) == "1010");
  }
  const std::vector<double> u3(3, 0.999);
  CHECK(to_string(step(models::stavskaya(0.8), ring_configuration("000"), u3)) == "000");
}

TEST_CASE("simulate examples") {
  const LocalRule xor0 = models::noisy_xor(0.0);
  const Configuration init = ring_configuration("0011");
  const auto d0 = simulate(xor0, init, 0, 5);
  REQUIRE(d0.rows.size() == 1);
  CHECK(d0.rows[0] == init);
  const auto d1 = simulate(xor0, init, 1, 5);
  CHECK(to_string(d1.rows[1]) == "0101");

  const LocalRule s = models::stavskaya(0.6);
  const auto a = simulate(s, ring_configuration("1101001110"), 50, 17);
  const auto b = simulate(s, ring_configuration("1101001110"), 50, 17);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i] == b.rows[i]);
}
