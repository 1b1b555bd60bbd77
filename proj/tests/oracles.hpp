#pragma once
// Independent reference computations for the tests. Nothing here calls the
// library's exact or envelope code paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "pca/core.hpp"

namespace oracle {

using pca::Cell;
using pca::Letter;
using pca::LocalRule;

inline std::vector<Letter> digits(std::size_t s, std::size_t n, int k) {
  std::vector<Letter> d(n);
  for (std::size_t i = n; i-- > 0;) {
    d[i] = static_cast<Letter>(s % k);
    s /= k;
  }
  return d;
}

// Q[x][y] = prod_c f(x|_{c+V})(y_c), computed cell by cell for every pair.
inline std::vector<std::vector<double>> ring_matrix(const LocalRule& rule, std::size_t n) {
  const int k = rule.alphabet_size();
  std::size_t states = 1;
  for (std::size_t i = 0; i < n; ++i) states *= k;
  std::vector<std::vector<double>> q(states, std::vector<double>(states, 1.0));
  for (std::size_t x = 0; x < states; ++x) {
    const auto cx = digits(x, n, k);
    for (std::size_t y = 0; y < states; ++y) {
      const auto cy = digits(y, n, k);
      for (std::size_t c = 0; c < n; ++c) {
        std::vector<Letter> w;
        for (int v : rule.offsets()) w.push_back(cx[((static_cast<long>(c) + v) % static_cast<long>(n) + n) % n]);
        q[x][y] *= pca::local_distribution(rule, w)[cy[c]];
      }
    }
  }
  return q;
}

// Power iteration with lazy averaging (I + Q)/2, which has the same
// stationary vectors and is aperiodic.
inline std::vector<double> lazy_power(const std::vector<std::vector<double>>& q, int iterations) {
  const std::size_t n = q.size();
  std::vector<double> pi(n, 1.0 / n), next(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t y = 0; y < n; ++y) next[y] = 0.5 * pi[y];
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) next[y] += 0.5 * pi[x] * q[x][y];
    pi.swap(next);
  }
  return pi;
}

// One-step duality values by enumerating the arc choices of every involved node.
// Cases per node: 0 left arc, 1 right arc, 2 all three, 3 vertical only.
inline double case_probability(double alpha, int c) { return c == 3 ? 1.0 - 1.5 * alpha : alpha / 2.0; }

// FINAE side at t = 1 via path parity in G1: x_k^1 = parity of occupied sources among its arcs.
inline double finae_one_step(double alpha, const std::vector<Cell>& a, Cell k, Cell l) {
  auto occupied = [&](Cell c) {
    for (Cell x : a)
      if (x == c) return 1;
    return 0;
  };
  auto label = [&](Cell c, int cs) {
    switch (cs) {
      case 0: return occupied(c - 1);
      case 1: return occupied(c + 1);
      case 2: return (occupied(c - 1) + occupied(c) + occupied(c + 1)) % 2;
      default: return occupied(c);
    }
  };
  double p = 0.0;
  for (int ck = 0; ck < 4; ++ck)
    for (int cl = 0; cl < 4; ++cl) {
      if (k == l && ck != cl) continue;
      const double w = k == l ? case_probability(alpha, ck) : case_probability(alpha, ck) * case_probability(alpha, cl);
      if (label(k, ck) != label(l, cl)) p += w;
    }
  return p;
}

// DBARW side at t = 1: particles at k and l each pick a move; count parity on A.
inline double dbarw_one_step(double alpha, const std::vector<Cell>& a, Cell k, Cell l) {
  if (k == l) return 0.0;
  auto targets = [](Cell c, int cs) -> std::vector<Cell> {
    switch (cs) {
      case 0: return {c - 1};
      case 1: return {c + 1};
      case 2: return {c - 1, c, c + 1};
      default: return {c};
    }
  };
  double p = 0.0;
  for (int ck = 0; ck < 4; ++ck)
    for (int cl = 0; cl < 4; ++cl) {
      std::map<Cell, int> count;
      for (Cell c : targets(k, ck)) ++count[c];
      for (Cell c : targets(l, cl)) ++count[c];
      int odd = 0;
      for (Cell x : a) odd += count[x] % 2;
      if (odd % 2 == 1) p += case_probability(alpha, ck) * case_probability(alpha, cl);
    }
  return p;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2.0;
}

}  // namespace oracle
