#pragma once
// Alphabets, local rules, configurations and forward simulation for
// one-dimensional probabilistic cellular automata.
//
// Row encoding of a local rule table: the neighborhood word
// (x_{v_0}, ..., x_{v_{m-1}}) maps to the base-|A| integer whose most
// significant digit is x_{v_0}, i.e. the letter at the first offset.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pca {

using Letter = std::uint8_t;
using Cell = std::int64_t;
using Time = std::int64_t;

inline constexpr int kMaxAlphabet = 16;

class RuleInvalid : public std::runtime_error {
 public:
  RuleInvalid(std::size_t row, const std::string& defect);
  std::size_t row() const { return row_; }
  const std::string& defect() const { return defect_; }

 private:
  std::size_t row_;
  std::string defect_;
};

class Alphabet {
 public:
  explicit Alphabet(int size, std::vector<std::string> names = {});

  int size() const { return size_; }
  std::string name(Letter a) const;

 private:
  int size_;
  std::vector<std::string> names_;
};

class Lattice {
 public:
  static Lattice ring(Cell n);
  static Lattice line() { return Lattice(0); }

  bool is_ring() const { return n_ > 0; }
  Cell size() const { return n_; }
  // Ring cells live in [0, n); Line cells are returned unchanged.
  Cell wrap(Cell k) const;

 private:
  explicit Lattice(Cell n) : n_(n) {}
  Cell n_;
};

// Ordered, distinct cell offsets. Order fixes the digit order of rule rows.
class Neighborhood {
 public:
  explicit Neighborhood(std::vector<int> offsets);

  const std::vector<int>& offsets() const { return offsets_; }
  std::size_t size() const { return offsets_.size(); }
  int min_offset() const;
  int max_offset() const;

 private:
  std::vector<int> offsets_;
};

// Transition function f : A^V -> M(A) stored as a dense stochastic table.
// An empty offset list is accepted: it describes a constant law (one row),
// which is what boundary cells of a restricted PCA carry.
class LocalRule {
 public:
  LocalRule(int alphabet_size, std::vector<int> offsets,
            std::vector<std::vector<double>> rows);

  // Constant rule with no neighborhood: every cell draws from `law`.
  static LocalRule constant(std::vector<double> law);

  int alphabet_size() const { return k_; }
  std::size_t arity() const { return offsets_.size(); }
  const std::vector<int>& offsets() const { return offsets_; }
  std::size_t num_rows() const { return num_rows_; }

  std::size_t encode(std::span<const Letter> word) const;
  std::vector<Letter> decode(std::size_t row) const;

  std::span<const double> row(std::size_t index) const {
    return {table_.data() + index * k_, static_cast<std::size_t>(k_)};
  }
  // Upper end of the half-open interval of letter a in row `index`. The last
  // letter with positive mass gets an upper end above 1 so that rounding in
  // the cumulative sums can never select a zero-probability letter.
  double cutoff(std::size_t index, Letter a) const { return cutoffs_[index * k_ + a]; }

  Letter update(std::size_t row_index, double r) const {
    const double* c = cutoffs_.data() + row_index * k_;
    Letter a = 0;
    while (a + 1 < k_ && !(r < c[a])) ++a;
    return a;
  }

  bool is_deterministic() const;

 private:
  int k_;
  std::vector<int> offsets_;
  std::size_t num_rows_;
  std::vector<double> table_;
  std::vector<double> cutoffs_;
};

// Checks the raw table invariants (row count, entries in [0,1], rows summing
// to 1 within 1e-12). Throws RuleInvalid naming the first bad row.
void validate_rule(int alphabet_size, std::size_t arity,
                   const std::vector<std::vector<double>>& rows);
void validate_rule(const LocalRule& rule);

std::vector<double> local_distribution(const LocalRule& rule, std::span<const Letter> word);

// Canonical update: letters are laid out on [0,1) in index order.
Letter update_cell(const LocalRule& rule, std::span<const Letter> word, double r);

struct Configuration {
  Cell first = 0;
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool operator==(const Configuration&) const = default;
};

Configuration ring_configuration(std::string_view digits);
std::string to_string(const Configuration& c);

struct SpaceTimeDiagram {
  std::vector<Configuration> rows;
};

// One synchronous step on the ring of size config.size(); noise[k] drives cell k.
Configuration step(const LocalRule& rule, const Configuration& config,
                   std::span<const double> noise);

// Ring simulation for `steps` steps; step t reads uniform_at(seed, t, k).
SpaceTimeDiagram simulate(const LocalRule& rule, const Configuration& init, Time steps,
                          std::uint64_t seed);

}  // namespace pca
