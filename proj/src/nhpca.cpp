#include "pca/nhpca.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "pca/model_io.hpp"
#include "pca/noise.hpp"

namespace pca {

NhPca::NhPca(std::vector<LocalRule> rules, std::vector<NhCell> cells) : rules_(std::move(rules)), cells_(std::move(cells)) {
  if (rules_.empty() || cells_.empty()) throw std::invalid_argument("NH-PCA needs at least one rule and one cell");
  const int k = rules_.front().alphabet_size();
  for (const auto& r : rules_)
    if (r.alphabet_size() != k) throw std::invalid_argument("NH-PCA rules must share one alphabet");
  std::sort(cells_.begin(), cells_.end(), [](const NhCell& a, const NhCell& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < cells_.size(); ++i)
    if (cells_[i].index == cells_[i - 1].index)
      throw std::invalid_argument("duplicate NH-PCA cell " + std::to_string(cells_[i].index));
  for (const auto& c : cells_) {
    if (c.rule >= rules_.size()) throw std::invalid_argument("cell " + std::to_string(c.index) + " names a missing rule");
    if (c.neighbors.size() != rules_[c.rule].arity())
      throw std::invalid_argument("cell " + std::to_string(c.index) + " neighbor count != rule arity");
    for (Cell n : c.neighbors)
      if (!contains(n))
        throw std::invalid_argument("cell " + std::to_string(c.index) + " reads cell " + std::to_string(n) +
                                    " outside the cell set");
  }
}

bool NhPca::contains(Cell c) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), c, [](const NhCell& a, Cell x) { return a.index < x; });
  return it != cells_.end() && it->index == c;
}

std::size_t NhPca::position(Cell c) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), c, [](const NhCell& a, Cell x) { return a.index < x; });
  if (it == cells_.end() || it->index != c) throw WindowOutOfDomain("cell " + std::to_string(c) + " not in the NH-PCA");
  return static_cast<std::size_t>(it - cells_.begin());
}

std::vector<Cell> NhPca::indices() const {
  std::vector<Cell> out;
  for (const auto& c : cells_) out.push_back(c.index);
  return out;
}

std::vector<Cell> NhPca::domain() const {
  std::vector<Cell> out;
  for (const auto& c : cells_)
    if (!c.neighbors.empty()) out.push_back(c.index);
  return out;
}

std::vector<Cell> NhPca::boundary() const {
  std::vector<Cell> out;
  for (const auto& c : cells_)
    if (c.neighbors.empty()) out.push_back(c.index);
  return out;
}

NhPca restrict(const LocalRule& rule, std::span<const Cell> domain, std::vector<double> nu) {
  if (domain.empty()) throw std::invalid_argument("restriction domain must be nonempty");
  if (nu.size() != static_cast<std::size_t>(rule.alphabet_size()))
    throw std::invalid_argument("boundary law must match the alphabet");
  const std::set<Cell> inside(domain.begin(), domain.end());
  std::set<Cell> closure(inside);
  for (Cell x : inside)
    for (int v : rule.offsets()) closure.insert(x + v);

  std::vector<LocalRule> rules{rule, LocalRule::constant(std::move(nu))};
  std::vector<NhCell> cells;
  for (Cell u : closure) {
    NhCell c{u, {}, 1};
    if (inside.count(u)) {
      c.rule = 0;
      for (int v : rule.offsets()) c.neighbors.push_back(u + v);
    }
    cells.push_back(std::move(c));
  }
  return NhPca(std::move(rules), std::move(cells));
}

NhPca restrict(const LocalRule& rule, Cell lo, Cell hi, std::vector<double> nu) {
  if (hi < lo) throw std::invalid_argument("empty restriction interval");
  std::vector<Cell> d;
  for (Cell c = lo; c <= hi; ++c) d.push_back(c);
  return restrict(rule, d, std::move(nu));
}

NhSampler::NhSampler(const NhPca& nh) : nh_(nh) {
  envs_.reserve(nh_.rules().size());
  for (const auto& r : nh_.rules()) envs_.push_back(build_envelope(r));
  for (const auto& c : nh_.cells()) {
    read_begin_.push_back(static_cast<std::uint32_t>(reads_.size()));
    for (Cell n : c.neighbors) reads_.push_back(static_cast<std::uint32_t>(nh_.position(n)));
  }
  read_begin_.push_back(static_cast<std::uint32_t>(reads_.size()));
}

std::vector<LetterSet> NhSampler::run(std::uint64_t seed, Time horizon, const NoiseObserver* observer) const {
  const std::size_t n = nh_.size();
  const auto& cells = nh_.cells();
  const std::uint16_t full = static_cast<std::uint16_t>(envs_.front().num_letters() - 1);
  const std::size_t base = static_cast<std::size_t>(envs_.front().num_letters());
  std::vector<std::uint16_t> cur(n, full), next(n);
  for (Time j = -horizon; j < 0; ++j) {
    const NoiseRow row(seed, j);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t w = 0;
      for (std::uint32_t p = read_begin_[c]; p < read_begin_[c + 1]; ++p) w = w * base + cur[reads_[p]];
      const double r = row(cells[c].index);
      if (observer) (*observer)(j, cells[c].index, r);
      next[c] = static_cast<std::uint16_t>(envs_[cells[c].rule].update(w, r) - 1u);
    }
    cur.swap(next);
  }
  std::vector<LetterSet> out(n);
  for (std::size_t c = 0; c < n; ++c) out[c] = static_cast<LetterSet>(cur[c] + 1u);
  return out;
}

PerfectSample NhSampler::sample(std::uint64_t seed, const SamplerOptions& options) const {
  const auto start = std::chrono::steady_clock::now();
  PerfectSample out;
  out.cells = nh_.indices();
  for (Time horizon : options.budget.horizons()) {
    ++out.restarts;
    out.depth = horizon;
    const auto sets = run(seed, horizon, options.observer);
    if (std::all_of(sets.begin(), sets.end(), [](LetterSet s) { return is_singleton(s); })) {
      out.status = SampleStatus::Coalesced;
      out.letters.resize(sets.size());
      for (std::size_t i = 0; i < sets.size(); ++i) out.letters[i] = single_letter(sets[i]);
      break;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

PerfectSample sample_restriction(const NhPca& nh, std::uint64_t seed, const SamplerOptions& options) {
  return NhSampler(nh).sample(seed, options);
}

std::vector<Letter> extend_measure_window(const NhPca& nh, const PerfectSample& sample, std::span<const Cell> window) {
  if (!sample.coalesced()) throw std::invalid_argument("cannot project a timed-out sample");
  const auto dom = nh.domain();
  std::vector<Letter> out;
  out.reserve(window.size());
  for (Cell c : window) {
    if (!std::binary_search(dom.begin(), dom.end(), c))
      throw WindowOutOfDomain("cell " + std::to_string(c) + " is outside the restriction domain");
    out.push_back(sample.letters.at(nh.position(c)));
  }
  return out;
}

nlohmann::json nhpca_to_json(const NhPca& nh) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : nh.rules()) rules.push_back(rule_to_json(r));
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : nh.cells()) cells.push_back({{"cell", c.index}, {"neighbors", c.neighbors}, {"rule", c.rule}});
  return {{"alphabet", nh.alphabet_size()}, {"rules", rules}, {"cells", cells}};
}

NhPca nhpca_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rules") || !j.contains("cells"))
    throw ModelFormatError("/", "NH-PCA files need \"rules\" and \"cells\"");
  if (!j["rules"].is_array() || j["rules"].empty()) throw ModelFormatError("/rules", "expected a nonempty array");
  std::vector<LocalRule> rules;
  for (std::size_t i = 0; i < j["rules"].size(); ++i) {
    const auto& r = j["rules"][i];
    const std::string ptr = "/rules/" + std::to_string(i);
    // Constant laws (empty neighborhood) are legal inside an NH-PCA.
    if (r.is_object() && r.contains("neighborhood") && r["neighborhood"].is_array() && r["neighborhood"].empty()) {
      if (!r.contains("table") || !r["table"].is_array() || r["table"].size() != 1 || !r["table"][0].is_array())
        throw ModelFormatError(ptr + "/table", "a constant law has exactly one row");
      std::vector<double> law;
      for (const auto& p : r["table"][0]) {
        if (!p.is_number()) throw ModelFormatError(ptr + "/table/0", "expected numbers");
        law.push_back(p.get<double>());
      }
      try {
        rules.push_back(LocalRule::constant(std::move(law)));
      } catch (const RuleInvalid& e) {
        throw ModelFormatError(ptr + "/table/0", e.defect());
      }
    } else {
      rules.push_back(rule_from_json(r, ptr));
    }
  }
  if (!j["cells"].is_array()) throw ModelFormatError("/cells", "expected an array");
  std::vector<NhCell> cells;
  for (std::size_t i = 0; i < j["cells"].size(); ++i) {
    const auto& c = j["cells"][i];
    const std::string ptr = "/cells/" + std::to_string(i);
    if (!c.is_object() || !c.contains("cell") || !c.contains("neighbors") || !c.contains("rule"))
      throw ModelFormatError(ptr, "cells need \"cell\", \"neighbors\" and \"rule\"");
    if (!c["cell"].is_number_integer() || !c["rule"].is_number_integer() || !c["neighbors"].is_array())
      throw ModelFormatError(ptr, "bad cell entry types");
    NhCell cell{c["cell"].get<Cell>(), {}, c["rule"].get<std::size_t>()};
    for (const auto& n : c["neighbors"]) {
      if (!n.is_number_integer()) throw ModelFormatError(ptr + "/neighbors", "expected integers");
      cell.neighbors.push_back(n.get<Cell>());
    }
    cells.push_back(std::move(cell));
  }
  try {
    return NhPca(std::move(rules), std::move(cells));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError("/cells", e.what());
  }
}

}  // namespace pca
