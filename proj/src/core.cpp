#include "pca/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "pca/noise.hpp"

namespace pca {

namespace {

constexpr double kRowTolerance = 1e-12;

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " " << value;
  return os.str();
}

}  // namespace

RuleInvalid::RuleInvalid(std::size_t row, const std::string& defect)
    : std::runtime_error("rule row " + std::to_string(row) + ": " + defect), row_(row), defect_(defect) {}

Alphabet::Alphabet(int size, std::vector<std::string> names) : size_(size), names_(std::move(names)) {
  if (size < 1 || size > kMaxAlphabet)
    throw std::invalid_argument("alphabet size must be in [1, 16], got " + std::to_string(size));
  if (!names_.empty() && names_.size() != static_cast<std::size_t>(size))
    throw std::invalid_argument("alphabet names must match the alphabet size");
}

std::string Alphabet::name(Letter a) const {
  if (!names_.empty()) return names_.at(a);
  return std::to_string(a);
}

Lattice Lattice::ring(Cell n) {
  if (n <= 0) throw std::invalid_argument("ring size must be positive");
  return Lattice(n);
}

Cell Lattice::wrap(Cell k) const {
  if (n_ == 0) return k;
  Cell m = k % n_;
  return m < 0 ? m + n_ : m;
}

Neighborhood::Neighborhood(std::vector<int> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty()) throw std::invalid_argument("neighborhood must be nonempty");
  std::unordered_set<int> seen(offsets_.begin(), offsets_.end());
  if (seen.size() != offsets_.size()) throw std::invalid_argument("neighborhood offsets must be distinct");
}

int Neighborhood::min_offset() const { return *std::min_element(offsets_.begin(), offsets_.end()); }
int Neighborhood::max_offset() const { return *std::max_element(offsets_.begin(), offsets_.end()); }

void validate_rule(int alphabet_size, std::size_t arity, const std::vector<std::vector<double>>& rows) {
  if (alphabet_size < 1 || alphabet_size > kMaxAlphabet)
    throw RuleInvalid(0, "alphabet size out of range");
  std::size_t expected = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    expected *= static_cast<std::size_t>(alphabet_size);
    if (expected > (std::size_t{1} << 26)) throw RuleInvalid(0, "table too large");
  }
  if (rows.size() != expected)
    throw RuleInvalid(rows.size(), "expected " + std::to_string(expected) + " rows, got " +
                                       std::to_string(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != static_cast<std::size_t>(alphabet_size))
      throw RuleInvalid(i, "row length " + std::to_string(row.size()) + " != alphabet size");
    double sum = 0.0;
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw RuleInvalid(i, describe("entry outside [0,1]:", p));
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) throw RuleInvalid(i, describe("row sums to", sum));
  }
}

LocalRule::LocalRule(int alphabet_size, std::vector<int> offsets, std::vector<std::vector<double>> rows)
    : k_(alphabet_size), offsets_(std::move(offsets)) {
  {
    std::unordered_set<int> seen(offsets_.begin(), offsets_.end());
    if (seen.size() != offsets_.size()) throw std::invalid_argument("neighborhood offsets must be distinct");
  }
  validate_rule(k_, offsets_.size(), rows);
  num_rows_ = rows.size();
  table_.reserve(num_rows_ * k_);
  cutoffs_.assign(num_rows_ * k_, 0.0);
  for (std::size_t i = 0; i < num_rows_; ++i) {
    table_.insert(table_.end(), rows[i].begin(), rows[i].end());
    int last_positive = 0;
    for (int a = 0; a < k_; ++a)
      if (rows[i][a] > 0.0) last_positive = a;
    double acc = 0.0;
    for (int a = 0; a < k_; ++a) {
      acc += rows[i][a];
      cutoffs_[i * k_ + a] = a >= last_positive ? 2.0 : acc;
    }
  }
}

LocalRule LocalRule::constant(std::vector<double> law) {
  const int k = static_cast<int>(law.size());
  return LocalRule(k, {}, {std::move(law)});
}

std::size_t LocalRule::encode(std::span<const Letter> word) const {
  if (word.size() != offsets_.size())
    throw std::invalid_argument("word length " + std::to_string(word.size()) + " != neighborhood size");
  std::size_t index = 0;
  for (Letter a : word) {
    if (a >= k_) throw std::invalid_argument("letter " + std::to_string(a) + " outside alphabet");
    index = index * k_ + a;
  }
  return index;
}

std::vector<Letter> LocalRule::decode(std::size_t row) const {
  std::vector<Letter> word(offsets_.size());
  for (std::size_t i = word.size(); i-- > 0;) {
    word[i] = static_cast<Letter>(row % k_);
    row /= k_;
  }
  return word;
}

bool LocalRule::is_deterministic() const {
  return std::all_of(table_.begin(), table_.end(), [](double p) { return p == 0.0 || p == 1.0; });
}

void validate_rule(const LocalRule& rule) {
  std::vector<std::vector<double>> rows;
  rows.reserve(rule.num_rows());
  for (std::size_t i = 0; i < rule.num_rows(); ++i) {
    auto r = rule.row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  validate_rule(rule.alphabet_size(), rule.arity(), rows);
}

std::vector<double> local_distribution(const LocalRule& rule, std::span<const Letter> word) {
  auto r = rule.row(rule.encode(word));
  return {r.begin(), r.end()};
}

Letter update_cell(const LocalRule& rule, std::span<const Letter> word, double r) {
  return rule.update(rule.encode(word), r);
}

Configuration ring_configuration(std::string_view digits) {
  Configuration c;
  for (char ch : digits) {
    if (ch >= '0' && ch <= '9') c.letters.push_back(static_cast<Letter>(ch - '0'));
    else if (ch >= 'a' && ch <= 'f') c.letters.push_back(static_cast<Letter>(10 + ch - 'a'));
    else throw std::invalid_argument(std::string("bad configuration digit '") + ch + "'");
  }
  return c;
}

std::string to_string(const Configuration& c) {
  std::string s;
  for (Letter a : c.letters) s.push_back(a < 10 ? static_cast<char>('0' + a) : static_cast<char>('a' + a - 10));
  return s;
}

Configuration step(const LocalRule& rule, const Configuration& config, std::span<const double> noise) {
  const Cell n = static_cast<Cell>(config.size());
  if (noise.size() != config.size()) throw std::invalid_argument("noise row length must match the ring size");
  const Lattice ring = Lattice::ring(n);
  const int k = rule.alphabet_size();
  Configuration out{config.first, std::vector<Letter>(config.size())};
  for (Cell c = 0; c < n; ++c) {
    std::size_t row = 0;
    for (int v : rule.offsets()) row = row * k + config.letters[ring.wrap(c + v)];
    out.letters[c] = rule.update(row, noise[c]);
  }
  return out;
}

SpaceTimeDiagram simulate(const LocalRule& rule, const Configuration& init, Time steps, std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  for (Letter a : init.letters)
    if (a >= rule.alphabet_size()) throw std::invalid_argument("initial configuration letter outside alphabet");
  SpaceTimeDiagram d;
  d.rows.reserve(steps + 1);
  d.rows.push_back(init);
  std::vector<double> noise(init.size());
  for (Time t = 0; t < steps; ++t) {
    const NoiseRow r(seed, t);
    for (std::size_t c = 0; c < noise.size(); ++c) noise[c] = r(static_cast<Cell>(c));
    d.rows.push_back(step(rule, d.rows.back(), noise));
  }
  return d;
}

}  // namespace pca
