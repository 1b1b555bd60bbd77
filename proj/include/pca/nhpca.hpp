#pragma once
// Non-homogeneous PCA on a finite cell set, and the restriction P(nu, D) of a
// homogeneous PCA to a finite domain with i.i.d. boundary cells.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "pca/cftp.hpp"
#include "pca/core.hpp"
#include "pca/envelope.hpp"

namespace pca {

class WindowOutOfDomain : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct NhCell {
  Cell index = 0;
  std::vector<Cell> neighbors;  // absolute cell indices, in rule digit order
  std::size_t rule = 0;         // index into NhPca::rules()
};

class NhPca {
 public:
  // Cells are sorted by index; every neighbor must be a cell, and each cell's
  // neighbor count must equal its rule's arity.
  NhPca(std::vector<LocalRule> rules, std::vector<NhCell> cells);

  const std::vector<LocalRule>& rules() const { return rules_; }
  const std::vector<NhCell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  int alphabet_size() const { return rules_.front().alphabet_size(); }

  bool contains(Cell c) const;
  std::size_t position(Cell c) const;
  std::vector<Cell> indices() const;
  // Cells with a neighborhood (updated by a rule) / cells with a constant law.
  std::vector<Cell> domain() const;
  std::vector<Cell> boundary() const;

 private:
  std::vector<LocalRule> rules_;
  std::vector<NhCell> cells_;
};

// P(nu, D): cells D + (V u {0}); cells of D follow `rule`, the rest draw from nu.
NhPca restrict(const LocalRule& rule, std::span<const Cell> domain, std::vector<double> nu);
// Interval domain {lo, ..., hi}.
NhPca restrict(const LocalRule& rule, Cell lo, Cell hi, std::vector<double> nu);

// Envelope coupling from the past on an NH-PCA. The per-cell envelope tables
// are built once so that repeated sampling only pays for the runs.
class NhSampler {
 public:
  explicit NhSampler(const NhPca& nh);

  PerfectSample sample(std::uint64_t seed, const SamplerOptions& options = {}) const;
  std::vector<LetterSet> run(std::uint64_t seed, Time horizon, const NoiseObserver* observer = nullptr) const;

  const NhPca& pca() const { return nh_; }

 private:
  NhPca nh_;
  std::vector<EnvelopeRule> envs_;
  std::vector<std::uint32_t> reads_;      // flattened neighbor positions
  std::vector<std::uint32_t> read_begin_;
};

PerfectSample sample_restriction(const NhPca& nh, std::uint64_t seed, const SamplerOptions& options = {});

// Projection of a sample over the NH cells onto K, which must lie in the domain.
std::vector<Letter> extend_measure_window(const NhPca& nh, const PerfectSample& sample, std::span<const Cell> window);

nlohmann::json nhpca_to_json(const NhPca& nh);
NhPca nhpca_from_json(const nlohmann::json& j);

}  // namespace pca
