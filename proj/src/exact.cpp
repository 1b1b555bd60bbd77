#include "pca/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "pca/models.hpp"

namespace pca {

namespace {

constexpr double kConjugacyTolerance = 1e-12;
constexpr double kParityTolerance = 1e-10;

std::size_t checked_states(int k, std::size_t cells) {
  std::size_t states = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    states *= static_cast<std::size_t>(k);
    if (states > kDenseStateGuard)
      throw StateSpaceGuard("dense transition matrix over " + std::to_string(k) + "^" + std::to_string(cells) +
                            " states exceeds the guard of " + std::to_string(kDenseStateGuard));
  }
  return states;
}

// Row of the product-form kernel given each cell's next-letter law.
void kron_row(const std::vector<std::span<const double>>& laws, int k, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> out) {
  std::vector<double> acc{1.0}, next;
  for (const auto& law : laws) {
    next.assign(acc.size() * k, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (int a = 0; a < k; ++a) next[i * k + a] = acc[i] * law[a];
    acc.swap(next);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) out(static_cast<Eigen::Index>(i)) = acc[i];
}

// Iterative Tarjan over the support graph (entries > 0).
std::vector<int> strongly_connected(const Eigen::MatrixXd& q, int& count) {
  const int n = static_cast<int>(q.rows());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, int>> call;  // (vertex, next successor to scan)
  int counter = 0;
  count = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      bool descended = false;
      while (next < n) {
        const int w = next++;
        if (q(v, w) <= 0.0) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const int v_done = v;
      if (low[v_done] == index[v_done]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != v_done);
        ++count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[v_done]);
    }
  }
  return comp;
}

int period_of(const Eigen::MatrixXd& q, const std::vector<std::size_t>& members) {
  std::vector<long> level(q.rows(), -1);
  std::vector<char> in(q.rows(), 0);
  for (auto m : members) in[m] = 1;
  std::queue<std::size_t> bfs;
  level[members[0]] = 0;
  bfs.push(members[0]);
  long g = 0;
  while (!bfs.empty()) {
    const std::size_t u = bfs.front();
    bfs.pop();
    for (auto v : members) {
      if (q(u, v) <= 0.0) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        bfs.push(v);
      } else {
        g = std::gcd(g, std::labs(level[u] + 1 - level[v]));
      }
    }
  }
  return static_cast<int>(g == 0 ? 1 : g);
}

std::vector<Letter> alternating(Cell n, Letter first) {
  std::vector<Letter> c(n);
  for (Cell i = 0; i < n; ++i) c[i] = static_cast<Letter>((first + i) & 1);
  return c;
}

}  // namespace

TransitionMatrix::TransitionMatrix(int alphabet_size, std::size_t cells, Eigen::MatrixXd q)
    : k_(alphabet_size), cells_(cells), q_(std::move(q)) {
  for (Eigen::Index i = 0; i < q_.rows(); ++i)
    if (std::abs(q_.row(i).sum() - 1.0) > 1e-12) throw RuleInvalid(static_cast<std::size_t>(i), "matrix row not stochastic");
}

std::size_t TransitionMatrix::encode(std::span<const Letter> config) const {
  std::size_t s = 0;
  for (Letter a : config) s = s * k_ + a;
  return s;
}

std::vector<Letter> TransitionMatrix::decode(std::size_t state) const {
  std::vector<Letter> c(cells_);
  for (std::size_t i = cells_; i-- > 0;) {
    c[i] = static_cast<Letter>(state % k_);
    state /= k_;
  }
  return c;
}

std::string TransitionMatrix::label(std::size_t state) const { return to_string(Configuration{0, decode(state)}); }

TransitionMatrix transition_matrix(const LocalRule& rule, Cell n) {
  if (n <= 0) throw std::invalid_argument("ring size must be positive");
  const int k = rule.alphabet_size();
  const std::size_t states = checked_states(k, static_cast<std::size_t>(n));
  const Lattice ring = Lattice::ring(n);
  Eigen::MatrixXd q(states, states);
  std::vector<std::span<const double>> laws(n);
  for (std::size_t x = 0; x < states; ++x) {
    std::vector<Letter> cfg(n);
    std::size_t s = x;
    for (Cell i = n; i-- > 0;) {
      cfg[i] = static_cast<Letter>(s % k);
      s /= k;
    }
    for (Cell c = 0; c < n; ++c) {
      std::size_t w = 0;
      for (int v : rule.offsets()) w = w * k + cfg[ring.wrap(c + v)];
      laws[c] = rule.row(w);
    }
    kron_row(laws, k, q.row(static_cast<Eigen::Index>(x)));
  }
  return TransitionMatrix(k, static_cast<std::size_t>(n), std::move(q));
}

TransitionMatrix transition_matrix(const NhPca& nh) {
  const int k = nh.alphabet_size();
  const std::size_t n = nh.size();
  const std::size_t states = checked_states(k, n);
  std::vector<std::vector<std::size_t>> reads(n);
  for (std::size_t c = 0; c < n; ++c)
    for (Cell nb : nh.cells()[c].neighbors) reads[c].push_back(nh.position(nb));
  Eigen::MatrixXd q(states, states);
  std::vector<std::span<const double>> laws(n);
  std::vector<Letter> cfg(n);
  for (std::size_t x = 0; x < states; ++x) {
    std::size_t s = x;
    for (std::size_t i = n; i-- > 0;) {
      cfg[i] = static_cast<Letter>(s % k);
      s /= k;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t w = 0;
      for (auto p : reads[c]) w = w * k + cfg[p];
      laws[c] = nh.rules()[nh.cells()[c].rule].row(w);
    }
    kron_row(laws, k, q.row(static_cast<Eigen::Index>(x)));
  }
  return TransitionMatrix(k, n, std::move(q));
}

StationaryReport stationary(const TransitionMatrix& tm) {
  const Eigen::MatrixXd& q = tm.matrix();
  const std::size_t n = tm.states();
  int count = 0;
  const std::vector<int> comp = strongly_connected(q, count);

  std::vector<char> terminal(count, 1);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (q(u, v) > 0.0 && comp[u] != comp[v]) terminal[comp[u]] = 0;

  StationaryReport report;
  for (int c = 0; c < count; ++c) {
    if (!terminal[c]) continue;
    std::vector<std::size_t> members;
    for (std::size_t u = 0; u < n; ++u)
      if (comp[u] == c) members.push_back(u);
    const Eigen::Index m = static_cast<Eigen::Index>(members.size());

    // (Q_CC^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) a(i, j) = q(members[j], members[i]) - (i == j ? 1.0 : 0.0);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    const Eigen::VectorXd pi_c = a.partialPivLu().solve(b);

    std::vector<double> pi(n, 0.0);
    for (Eigen::Index i = 0; i < m; ++i) pi[members[i]] = std::max(pi_c(i), 0.0);
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& p : pi) p /= total;

    Eigen::Map<const Eigen::RowVectorXd> row(pi.data(), static_cast<Eigen::Index>(n));
    report.residual = std::max(report.residual, (row * q - row).cwiseAbs().maxCoeff());
    report.periods.push_back(period_of(q, members));
    report.terminal_components.push_back(std::move(members));
    report.distributions.push_back(std::move(pi));
  }
  report.ergodic = report.distributions.size() == 1 && report.periods[0] == 1;
  return report;
}

std::vector<double> stationary_power(const TransitionMatrix& tm, int iterations) {
  const auto n = static_cast<Eigen::Index>(tm.states());
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::RowVectorXd avg = Eigen::RowVectorXd::Zero(n);
  for (int i = 0; i < iterations; ++i) {
    v = v * tm.matrix();
    avg += v;
  }
  avg /= static_cast<double>(iterations);
  return {avg.data(), avg.data() + n};
}

bool verify_parity_theorem(double alpha, Cell n) {
  if (n < 2) throw std::invalid_argument("parity check needs n >= 2");
  const TransitionMatrix q = transition_matrix(models::majority(alpha), n);
  const StationaryReport rep = stationary(q);
  if (!rep.unique() || rep.residual > kParityTolerance) return false;
  const auto& pi = rep.distributions[0];
  if (n % 2 == 0) {
    const std::size_t a = q.encode(alternating(n, 0));
    const std::size_t b = q.encode(alternating(n, 1));
    for (std::size_t s = 0; s < pi.size(); ++s) {
      const double expected = (s == a || s == b) ? 0.5 : 0.0;
      if (std::abs(pi[s] - expected) > kParityTolerance) return false;
    }
    return rep.terminal_components[0].size() == 2 && rep.periods[0] == 2 && !rep.ergodic;
  }
  return rep.ergodic && rep.terminal_components[0].size() == pi.size() &&
         std::all_of(pi.begin(), pi.end(), [](double p) { return p > 0.0; });
}

Eigen::MatrixXd flip_permutation(Cell n, bool odd) {
  const std::size_t states = checked_states(2, static_cast<std::size_t>(n));
  std::size_t mask = 0;
  for (Cell i = 0; i < n; ++i)
    if ((i % 2 == 1) == odd) mask |= std::size_t{1} << (n - 1 - i);  // cell 0 is the top bit
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(states, states);
  for (std::size_t s = 0; s < states; ++s) p(s, s ^ mask) = 1.0;
  return p;
}

bool verify_flip_conjugacy(double alpha, Cell n) {
  if (n <= 0 || n % 2 != 0) throw ParityError("flip conjugacy needs an even ring size, got " + std::to_string(n));
  const Eigen::MatrixXd maj = transition_matrix(models::majority(alpha), n).matrix();
  const Eigen::MatrixXd fin = transition_matrix(models::finae(alpha), n).matrix();
  const Eigen::MatrixXd conj = flip_permutation(n, true) * fin * flip_permutation(n, false);
  return (maj - conj).cwiseAbs().maxCoeff() <= kConjugacyTolerance;
}

std::string stationary_csv(const TransitionMatrix& q, std::span<const double> pi) {
  std::ostringstream os;
  os.precision(17);
  os << "state,configuration,probability\n";
  for (std::size_t s = 0; s < pi.size(); ++s) os << s << ',' << q.label(s) << ',' << pi[s] << '\n';
  return os.str();
}

}  // namespace pca
