#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "pca/cftp.hpp"
#include "pca/exact.hpp"
#include "pca/models.hpp"
#include "pca/noise.hpp"
#include "pca/stats.hpp"

using namespace pca;

TEST_CASE("dependence cones") {
  const std::vector<Cell> k0{0};
  const std::vector<int> v3{-1, 0, 1}, v2{0, 1};
  CHECK(dependence_cone(k0, v3, 2) == std::vector<Cell>{-2, -1, 0, 1, 2});
  CHECK(dependence_cone(k0, v3, 0) == k0);
  CHECK(dependence_cone(k0, v2, 3) == std::vector<Cell>{0, 1, 2, 3});
  const std::vector<Cell> gap{0, 10};
  CHECK(dependence_cone(gap, v2, 1) == std::vector<Cell>{0, 1, 10, 11});
  CHECK(dependence_cone(k0, v3, 3, 5) == std::vector<Cell>{0, 1, 2, 3, 4});
}

TEST_CASE("restart horizons double up to max_depth inclusive") {
  SamplerBudget b;
  b.max_depth = 10;
  CHECK(b.horizons() == std::vector<Time>{1, 2, 4, 8, 10});
  b.max_depth = 8;
  CHECK(b.horizons() == std::vector<Time>{1, 2, 4, 8});
}

TEST_CASE("constant rules coalesce at depth 1") {
  const LocalRule c = models::constant(2, {0, 1}, {0.3, 0.7});
  const std::vector<Cell> k{0, 3};
  CHECK(cftp_basic_finite(c, 4, 9).depth == 1);
  CHECK(cftp_basic_infinite(c, k, 9).depth == 1);
  CHECK(sample_epca_finite(c, 4, 9).depth == 1);
  CHECK(sample_epca_infinite(c, k, 9).depth == 1);
}

TEST_CASE("majority never yields an envelope sample") {
  SamplerOptions o;
  o.budget.max_depth = 256;
  const std::vector<Cell> k{0};
  for (std::uint64_t s = 0; s < 5; ++s) {
    CHECK(sample_epca_finite(models::majority(0.5), 5, s, o).status == SampleStatus::Timeout);
    const auto p = sample_epca_infinite(models::majority(0.5), k, s, o);
    CHECK_FALSE(p.coalesced());
    CHECK(p.letters.empty());
    CHECK(p.depth == 256);
  }
}

TEST_CASE("basic CFTP on Z cannot coalesce for majority") {
  SamplerOptions o;
  o.budget.max_depth = 8;
  const std::vector<Cell> k{0};
  CHECK_FALSE(cftp_basic_infinite(models::majority(0.5), k, 3, o).coalesced());
}

TEST_CASE("majority on ring 4: coalesced basic samples lie on the two-cycle") {
  SamplerOptions o;
  o.budget.max_depth = 1 << 12;
  const LocalRule maj = models::majority(0.5);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = cftp_basic_finite(maj, 4, s, o);
    if (!p.coalesced()) continue;
    const std::string w = to_string(Configuration{0, p.letters});
    CHECK((w == "0101" || w == "1010"));
  }
}

TEST_CASE("envelope and basic samplers agree wherever the envelope halts") {
  const LocalRule x = models::noisy_xor(0.3);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto e = sample_epca_finite(x, 4, s);
    const auto b = cftp_basic_finite(x, 4, s);
    REQUIRE(e.coalesced());
    CHECK(b.coalesced());
    CHECK(e.letters == b.letters);
  }
  const LocalRule st = models::stavskaya(0.3);
  const std::vector<Cell> k{-1, 0, 2};
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto e = sample_epca_infinite(st, k, s);
    const auto b = cftp_basic_infinite(st, k, s);
    REQUIRE(e.coalesced());
    CHECK(e.letters == b.letters);
    CHECK(e.cells == k);
  }
}

TEST_CASE("restarts reread identical noise") {
  std::map<std::pair<Time, Cell>, double> seen;
  std::size_t reads = 0, mismatches = 0;
  const NoiseObserver obs = [&](Time t, Cell k, double v) {
    ++reads;
    auto [it, fresh] = seen.emplace(std::make_pair(t, k), v);
    if (!fresh && it->second != v) ++mismatches;
  };
  SamplerOptions o;
  o.observer = &obs;
  const auto p = sample_epca_finite(models::noisy_xor(0.1), 6, 21, o);
  CHECK(p.restarts > 1);
  CHECK(reads > seen.size());
  CHECK(mismatches == 0);
  for (const auto& [key, v] : seen) CHECK(v == uniform_at(21, key.first, key.second));
}

TEST_CASE("unknown cells shrink as the horizon deepens") {
  const EnvelopeRule env = build_envelope(models::noisy_xor(0.15));
  for (std::uint64_t s = 0; s < 10; ++s) {
    std::vector<LetterSet> prev;
    for (Time h = 1; h <= 64; ++h) {
      const auto cur = envelope_run_finite(env, 7, s, h);
      if (!prev.empty())
        for (std::size_t i = 0; i < cur.size(); ++i) CHECK((cur[i] & ~prev[i]) == 0);
      prev = cur;
    }
  }
}

TEST_CASE("envelope sampler on noisy XOR(0.3), n=5, halts") {
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(sample_epca_finite(models::noisy_xor(0.3), 5, s).coalesced());
}

TEST_CASE("Stavskaya(0.4) on Z halts on K={0,1}") {
  const std::vector<Cell> k{0, 1};
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(sample_epca_infinite(models::stavskaya(0.4), k, s).coalesced());
}

TEST_CASE("state guard") {
  SamplerOptions o;
  o.state_guard = 16;
  CHECK_THROWS_AS(cftp_basic_finite(models::noisy_xor(0.2), 8, 1, o), StateSpaceGuard);
}

TEST_CASE("noisy XOR(0.2), ring 3: basic samples match the stationary law") {
  const LocalRule x = models::noisy_xor(0.2);
  const auto pi = oracle::lazy_power(oracle::ring_matrix(x, 3), 400);
  std::vector<double> freq(8, 0.0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto p = cftp_basic_finite(x, 3, derive_seed(77, i));
    REQUIRE(p.coalesced());
    freq[(p.letters[0] << 2) | (p.letters[1] << 1) | p.letters[2]] += 1.0 / n;
  }
  CHECK(oracle::total_variation(freq, pi) <= 0.02);
}

TEST_CASE("Stavskaya(0.1) on Z: P(x_0 = 1) matches a long forward run") {
  const LocalRule s = models::stavskaya(0.1);
  const std::vector<Cell> k{0};
  std::uint64_t ones = 0;
  const std::uint64_t n = 4000;
  for (std::uint64_t i = 0; i < n; ++i) ones += cftp_basic_infinite(s, k, derive_seed(5, i)).letters[0];
  const auto d = simulate(s, ring_configuration(std::string(4096, '1')), 200, 99);
  std::uint64_t fwd = 0;
  for (Letter a : d.rows.back().letters) fwd += a;
  CHECK(wilson_interval(ones, n).overlaps(wilson_interval(fwd, 4096)));
}

TEST_CASE("sampler error shrinks like the multinomial noise floor") {
  // 64 states: the TV noise floor is about 0.032 at 10^4 samples and 0.010 at 10^5.
  const LocalRule x = models::noisy_xor(0.2);
  const TransitionMatrix q = transition_matrix(x, 6);
  const auto pi = stationary(q).distributions[0];
  const EnvelopeRule env = build_envelope(x);
  const std::uint64_t n = 100000;
  std::vector<double> count(q.states(), 0.0);
  for (std::uint64_t i = 0; i < n; ++i) count[q.encode(sample_epca_finite(env, 6, derive_seed(4, i)).letters)] += 1;
  double tv = 0.0, chi2 = 0.0;
  for (std::size_t s = 0; s < count.size(); ++s) {
    tv += std::abs(count[s] / n - pi[s]) / 2;
    chi2 += std::pow(count[s] - n * pi[s], 2) / (n * pi[s]);
  }
  CHECK(tv <= 0.015);
  CHECK(chi2 < 92.01);  // 99% quantile, 63 degrees of freedom
}
