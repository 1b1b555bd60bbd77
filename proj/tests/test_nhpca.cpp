#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pca/exact.hpp"
#include "pca/models.hpp"
#include "pca/nhpca.hpp"
#include "pca/noise.hpp"

using namespace pca;

TEST_CASE("restriction cell sets") {
  const NhPca m = restrict(models::majority(0.5), -1, 1, {0.5, 0.5});
  CHECK(m.indices() == std::vector<Cell>{-2, -1, 0, 1, 2});
  CHECK(m.boundary() == std::vector<Cell>{-2, 2});
  CHECK(m.domain() == std::vector<Cell>{-1, 0, 1});

  const NhPca s = restrict(models::stavskaya(0.6), 0, 4, {0.5, 0.5});
  CHECK(s.boundary() == std::vector<Cell>{5});

  const LocalRule self = models::constant(2, {0}, {0.5, 0.5});
  const NhPca one = restrict(self, 3, 3, {0.5, 0.5});
  CHECK(one.indices() == std::vector<Cell>{3});
  CHECK(one.boundary().empty());
}

TEST_CASE("interior cells keep the homogeneous rule") {
  const LocalRule maj = models::majority(0.4);
  const NhPca m = restrict(maj, -3, 3, {0.5, 0.5});
  for (const auto& c : m.cells()) {
    if (c.neighbors.empty()) continue;
    CHECK(c.rule == 0);
    CHECK(c.neighbors == std::vector<Cell>{c.index - 1, c.index, c.index + 1});
  }
  // Restricting again to an interior cell reproduces the same rule and neighbors.
  const NhPca again = restrict(m.rules()[0], 0, 0, {0.5, 0.5});
  CHECK(again.cells()[1].neighbors == std::vector<Cell>{-1, 0, 1});
}

TEST_CASE("bad NH-PCA definitions are rejected") {
  const LocalRule maj = models::majority(0.4);
  CHECK_THROWS(NhPca({maj}, {NhCell{0, {-1, 0, 1}, 0}}));
  CHECK_THROWS(NhPca({maj}, {NhCell{0, {0, 0}, 0}}));
  CHECK_THROWS(restrict(maj, 0, 0, {1.0}));
}

TEST_CASE("an all-boundary NH-PCA is sampled at depth 1") {
  const NhPca nh({LocalRule::constant({0.25, 0.75})}, {NhCell{0, {}, 0}, NhCell{1, {}, 0}, NhCell{7, {}, 0}});
  const auto p = sample_restriction(nh, 4);
  CHECK(p.coalesced());
  CHECK(p.depth == 1);
  CHECK(p.letters.size() == 3);
}

TEST_CASE("window projection") {
  const NhPca m = restrict(models::majority(0.6), -4, 4, {0.5, 0.5});
  const auto p = sample_restriction(m, 12);
  REQUIRE(p.coalesced());
  const auto d = m.domain();
  const auto all = extend_measure_window(m, p, d);
  CHECK(all.size() == 9);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(all[i] == p.letters[m.position(d[i])]);
  const std::vector<Cell> k{0, 1};
  CHECK(extend_measure_window(m, p, k).size() == 2);
  const std::vector<Cell> out{4, 5};
  CHECK_THROWS_AS(extend_measure_window(m, p, out), WindowOutOfDomain);
}

TEST_CASE("Majority(0.6) restrictions halt") {
  const NhSampler s(restrict(models::majority(0.6), -4, 4, {0.5, 0.5}));
  for (std::uint64_t i = 0; i < 30; ++i) CHECK(s.sample(i).coalesced());
}

TEST_CASE("Majority(0.3) restriction marginals match the exact NH chain") {
  const NhPca nh = restrict(models::majority(0.3), -4, 4, {0.5, 0.5});
  const TransitionMatrix q = transition_matrix(nh);
  REQUIRE(q.states() == 2048);
  const StationaryReport rep = stationary(q);
  REQUIRE(rep.unique());
  CHECK(rep.residual <= 1e-10);
  const std::size_t p0 = nh.position(0), p1 = nh.position(1);
  double exact_equal = 0.0;
  for (std::size_t s = 0; s < q.states(); ++s) {
    const auto c = q.decode(s);
    if (c[p0] == c[p1]) exact_equal += rep.distributions[0][s];
  }
  const NhSampler sampler(nh);
  const int n = 4000;
  int equal = 0;
  for (int i = 0; i < n; ++i) {
    const auto p = sampler.sample(derive_seed(31, i));
    REQUIRE(p.coalesced());
    equal += p.letters[p0] == p.letters[p1];
  }
  const double se = std::sqrt(exact_equal * (1 - exact_equal) / n);
  CHECK(std::abs(equal / double(n) - exact_equal) <= 3 * se);
}

TEST_CASE("boundary cells are i.i.d. nu") {
  const NhPca nh = restrict(models::majority(0.5), -3, 3, {0.3, 0.7});
  const NhSampler s(nh);
  const std::size_t a = nh.position(-4), b = nh.position(4);
  // Chi-square over the four joint outcomes of the two boundary cells.
  std::vector<double> count(4, 0.0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto p = s.sample(derive_seed(8, i));
    REQUIRE(p.coalesced());
    count[p.letters[a] * 2 + p.letters[b]] += 1;
  }
  const double expect[4] = {0.09, 0.21, 0.21, 0.49};
  double chi2 = 0.0;
  for (int j = 0; j < 4; ++j) chi2 += std::pow(count[j] - n * expect[j], 2) / (n * expect[j]);
  CHECK(chi2 < 11.345);  // 99% quantile, 3 degrees of freedom
}

TEST_CASE("NH-PCA JSON round trip") {
  const NhPca nh = restrict(models::stavskaya(0.6), 0, 2, {0.5, 0.5});
  const NhPca back = nhpca_from_json(nhpca_to_json(nh));
  CHECK(back.indices() == nh.indices());
  CHECK(back.boundary() == nh.boundary());
  CHECK(back.rules().size() == nh.rules().size());
}
