#include "pca/cftp.hpp"

#include <algorithm>
#include <chrono>

#include "pca/noise.hpp"

namespace pca {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Interval {
  Cell lo, hi;  // inclusive
};

// A dependence-cone layer: sorted, disjoint, non-adjacent intervals.
class Layer {
 public:
  Layer() = default;
  explicit Layer(std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (Cell c : cells) add(c, c);
    finish();
  }

  Layer grown(std::span<const int> offsets) const {
    std::vector<Interval> shifted;
    shifted.reserve(parts_.size() * offsets.size());
    for (const auto& p : parts_)
      for (int v : offsets) shifted.push_back({p.lo + v, p.hi + v});
    std::sort(shifted.begin(), shifted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Layer out;
    for (const auto& s : shifted) out.add(s.lo, s.hi);
    out.finish();
    return out;
  }

  std::size_t size() const { return size_; }
  const std::vector<Interval>& parts() const { return parts_; }

  // Position of cell c in the flattened layer; c must belong to the layer.
  std::size_t position(Cell c) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), c, [](Cell x, const Interval& p) { return x < p.lo; });
    const std::size_t i = static_cast<std::size_t>(it - parts_.begin()) - 1;
    return start_[i] + static_cast<std::size_t>(c - parts_[i].lo);
  }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    out.reserve(size_);
    for (const auto& p : parts_)
      for (Cell c = p.lo; c <= p.hi; ++c) out.push_back(c);
    return out;
  }

 private:
  void add(Cell lo, Cell hi) {
    if (!parts_.empty() && lo <= parts_.back().hi + 1) parts_.back().hi = std::max(parts_.back().hi, hi);
    else parts_.push_back({lo, hi});
  }
  void finish() {
    start_.clear();
    size_ = 0;
    for (const auto& p : parts_) {
      start_.push_back(size_);
      size_ += static_cast<std::size_t>(p.hi - p.lo + 1);
    }
  }

  std::vector<Interval> parts_;
  std::vector<std::size_t> start_;
  std::size_t size_ = 0;
};

std::vector<Layer> cone_layers(std::span<const Cell> target, std::span<const int> offsets, Time depth) {
  std::vector<Layer> layers;
  layers.reserve(depth + 1);
  layers.emplace_back(std::vector<Cell>(target.begin(), target.end()));
  for (Time t = 1; t <= depth; ++t) layers.push_back(layers.back().grown(offsets));
  return layers;
}

// For each output cell (flattened) and offset, the input-layer position it reads.
std::vector<std::uint32_t> read_positions(const Layer& out, const Layer& in, std::span<const int> offsets) {
  std::vector<std::uint32_t> pos;
  pos.reserve(out.size() * offsets.size());
  for (const auto& p : out.parts())
    for (Cell c = p.lo; c <= p.hi; ++c)
      for (int v : offsets) pos.push_back(static_cast<std::uint32_t>(in.position(c + v)));
  return pos;
}

std::vector<std::uint32_t> ring_positions(Cell n, std::span<const int> offsets) {
  const Lattice ring = Lattice::ring(n);
  std::vector<std::uint32_t> pos;
  pos.reserve(n * offsets.size());
  for (Cell c = 0; c < n; ++c)
    for (int v : offsets) pos.push_back(static_cast<std::uint32_t>(ring.wrap(c + v)));
  return pos;
}

std::size_t checked_state_count(int k, std::size_t cells, std::size_t guard) {
  std::size_t states = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    states *= static_cast<std::size_t>(k);
    if (states > guard)
      throw StateSpaceGuard("enumerating " + std::to_string(k) + "^" + std::to_string(cells) +
                            " states exceeds the guard of " + std::to_string(guard));
  }
  return states;
}

// Applies one step of the homogeneous rule to every state code in `states`.
// Codes are base-k with the first cell most significant.
std::vector<std::uint64_t> image_step(const LocalRule& rule, const std::vector<std::uint64_t>& states,
                                      std::size_t in_cells, std::span<const std::uint32_t> reads,
                                      std::span<const Cell> out_cells, const NoiseRow& row, Time t,
                                      const NoiseObserver* observer) {
  const int k = rule.alphabet_size();
  const std::size_t m = rule.arity();
  std::vector<double> r(out_cells.size());
  for (std::size_t c = 0; c < out_cells.size(); ++c) {
    r[c] = row(out_cells[c]);
    if (observer) (*observer)(t, out_cells[c], r[c]);
  }
  std::vector<Letter> x(in_cells);
  std::vector<std::uint64_t> next;
  next.reserve(states.size());
  for (std::uint64_t code : states) {
    for (std::size_t i = in_cells; i-- > 0;) {
      x[i] = static_cast<Letter>(code % k);
      code /= k;
    }
    std::uint64_t y = 0;
    for (std::size_t c = 0; c < out_cells.size(); ++c) {
      std::size_t w = 0;
      for (std::size_t i = 0; i < m; ++i) w = w * k + x[reads[c * m + i]];
      y = y * k + rule.update(w, r[c]);
    }
    next.push_back(y);
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

std::vector<Letter> decode_state(std::uint64_t code, int k, std::size_t cells) {
  std::vector<Letter> out(cells);
  for (std::size_t i = cells; i-- > 0;) {
    out[i] = static_cast<Letter>(code % k);
    code /= k;
  }
  return out;
}

// One envelope step: out[c] from the digits (mask - 1) of `in` read at reads[c*m + i].
void envelope_step(const EnvelopeRule& env, std::span<const std::uint16_t> in, std::span<std::uint16_t> out,
                   std::span<const std::uint32_t> reads, std::span<const Cell> out_cells, const NoiseRow& row,
                   Time t, const NoiseObserver* observer) {
  const std::size_t m = env.arity();
  const std::size_t base = static_cast<std::size_t>(env.num_letters());
  for (std::size_t c = 0; c < out.size(); ++c) {
    std::size_t w = 0;
    const std::uint32_t* rd = reads.data() + c * m;
    for (std::size_t i = 0; i < m; ++i) w = w * base + in[rd[i]];
    const double r = row(out_cells[c]);
    if (observer) (*observer)(t, out_cells[c], r);
    out[c] = static_cast<std::uint16_t>(env.update(w, r) - 1u);
  }
}

std::vector<LetterSet> to_sets(std::span<const std::uint16_t> digits) {
  std::vector<LetterSet> out(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) out[i] = static_cast<LetterSet>(digits[i] + 1u);
  return out;
}

bool all_singletons(std::span<const LetterSet> sets) {
  return std::all_of(sets.begin(), sets.end(), [](LetterSet s) { return is_singleton(s); });
}

std::vector<Letter> letters_of(std::span<const LetterSet> sets) {
  std::vector<Letter> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out[i] = single_letter(sets[i]);
  return out;
}

std::vector<Cell> ring_cells(Cell n) {
  std::vector<Cell> cells(n);
  for (Cell c = 0; c < n; ++c) cells[c] = c;
  return cells;
}

}  // namespace

std::vector<Time> SamplerBudget::horizons() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be positive");
  std::vector<Time> out;
  for (Time t = 1; t < max_depth; t *= 2) out.push_back(t);
  out.push_back(max_depth);
  return out;
}

std::vector<Cell> dependence_cone(std::span<const Cell> target, std::span<const int> offsets, Time t) {
  if (t < 0) throw std::invalid_argument("cone depth must be nonnegative");
  Layer layer{std::vector<Cell>(target.begin(), target.end())};
  for (Time i = 0; i < t; ++i) layer = layer.grown(offsets);
  return layer.cells();
}

std::vector<Cell> dependence_cone(std::span<const Cell> target, std::span<const int> offsets, Time t, Cell ring) {
  const Lattice lat = Lattice::ring(ring);
  std::vector<Cell> cone = dependence_cone(target, offsets, t);
  for (Cell& c : cone) c = lat.wrap(c);
  std::sort(cone.begin(), cone.end());
  cone.erase(std::unique(cone.begin(), cone.end()), cone.end());
  return cone;
}

PerfectSample cftp_basic_finite(const LocalRule& rule, Cell n, std::uint64_t seed, const SamplerOptions& options) {
  const auto start = Clock::now();
  const int k = rule.alphabet_size();
  const std::size_t states = checked_state_count(k, static_cast<std::size_t>(n), options.state_guard);
  const auto reads = ring_positions(n, rule.offsets());
  const auto cells = ring_cells(n);

  PerfectSample out;
  out.cells = cells;
  for (Time horizon : options.budget.horizons()) {
    ++out.restarts;
    out.depth = horizon;
    std::vector<std::uint64_t> image(states);
    for (std::size_t s = 0; s < states; ++s) image[s] = s;
    for (Time j = -horizon; j < 0; ++j)
      image = image_step(rule, image, static_cast<std::size_t>(n), reads, cells, NoiseRow(seed, j), j,
                         options.observer);
    if (image.size() == 1) {
      out.status = SampleStatus::Coalesced;
      out.letters = decode_state(image[0], k, static_cast<std::size_t>(n));
      break;
    }
  }
  out.seconds = elapsed(start);
  return out;
}

PerfectSample cftp_basic_infinite(const LocalRule& rule, std::span<const Cell> target, std::uint64_t seed,
                                  const SamplerOptions& options) {
  const auto start = Clock::now();
  const int k = rule.alphabet_size();
  const auto horizons = options.budget.horizons();
  PerfectSample out;
  out.cells = Layer{std::vector<Cell>(target.begin(), target.end())}.cells();
  for (Time horizon : horizons) {
    const auto layers = cone_layers(out.cells, rule.offsets(), horizon);
    const std::size_t states = checked_state_count(k, layers[horizon].size(), options.state_guard);
    ++out.restarts;
    out.depth = horizon;
    std::vector<std::uint64_t> image(states);
    for (std::size_t s = 0; s < states; ++s) image[s] = s;
    for (Time j = -horizon; j < 0; ++j) {
      const Layer& in = layers[-j];
      const Layer& next = layers[-j - 1];
      const auto reads = read_positions(next, in, rule.offsets());
      image = image_step(rule, image, in.size(), reads, next.cells(), NoiseRow(seed, j), j, options.observer);
    }
    if (image.size() == 1) {
      out.status = SampleStatus::Coalesced;
      out.letters = decode_state(image[0], k, out.cells.size());
      break;
    }
  }
  out.seconds = elapsed(start);
  return out;
}

std::vector<LetterSet> envelope_run_finite(const EnvelopeRule& env, Cell n, std::uint64_t seed, Time horizon,
                                           const NoiseObserver* observer) {
  const std::uint16_t full = static_cast<std::uint16_t>(env.num_letters() - 1);
  std::vector<std::uint16_t> cur(n, full), next(n);
  // The all-full word maps to the full letter for every r: nothing can change.
  if (env.unknown_absorbing()) return to_sets(cur);
  const auto reads = ring_positions(n, env.offsets());
  const auto cells = ring_cells(n);
  for (Time j = -horizon; j < 0; ++j) {
    envelope_step(env, cur, next, reads, cells, NoiseRow(seed, j), j, observer);
    cur.swap(next);
  }
  return to_sets(cur);
}

std::vector<LetterSet> envelope_run_infinite(const EnvelopeRule& env, std::span<const Cell> target,
                                             std::uint64_t seed, Time horizon, const NoiseObserver* observer) {
  const std::uint16_t full = static_cast<std::uint16_t>(env.num_letters() - 1);
  const auto layers = cone_layers(target, env.offsets(), horizon);
  if (env.unknown_absorbing()) return to_sets(std::vector<std::uint16_t>(layers[0].size(), full));
  std::vector<std::uint16_t> cur(layers[horizon].size(), full), next;
  for (Time j = -horizon; j < 0; ++j) {
    const Layer& in = layers[-j];
    const Layer& out = layers[-j - 1];
    next.assign(out.size(), 0);
    const auto reads = read_positions(out, in, env.offsets());
    const auto cells = out.cells();
    envelope_step(env, cur, next, reads, cells, NoiseRow(seed, j), j, observer);
    cur.swap(next);
  }
  return to_sets(cur);
}

PerfectSample sample_epca_finite(const EnvelopeRule& env, Cell n, std::uint64_t seed, const SamplerOptions& options) {
  const auto start = Clock::now();
  PerfectSample out;
  out.cells = ring_cells(n);
  for (Time horizon : options.budget.horizons()) {
    ++out.restarts;
    out.depth = horizon;
    const auto sets = envelope_run_finite(env, n, seed, horizon, options.observer);
    if (all_singletons(sets)) {
      out.status = SampleStatus::Coalesced;
      out.letters = letters_of(sets);
      break;
    }
  }
  out.seconds = elapsed(start);
  return out;
}

PerfectSample sample_epca_finite(const LocalRule& rule, Cell n, std::uint64_t seed, const SamplerOptions& options) {
  return sample_epca_finite(build_envelope(rule), n, seed, options);
}

PerfectSample sample_epca_infinite(const EnvelopeRule& env, std::span<const Cell> target, std::uint64_t seed,
                                   const SamplerOptions& options) {
  const auto start = Clock::now();
  PerfectSample out;
  out.cells = Layer{std::vector<Cell>(target.begin(), target.end())}.cells();
  for (Time horizon : options.budget.horizons()) {
    ++out.restarts;
    out.depth = horizon;
    const auto sets = envelope_run_infinite(env, out.cells, seed, horizon, options.observer);
    if (all_singletons(sets)) {
      out.status = SampleStatus::Coalesced;
      out.letters = letters_of(sets);
      break;
    }
  }
  out.seconds = elapsed(start);
  return out;
}

PerfectSample sample_epca_infinite(const LocalRule& rule, std::span<const Cell> target, std::uint64_t seed,
                                   const SamplerOptions& options) {
  return sample_epca_infinite(build_envelope(rule), target, seed, options);
}

}  // namespace pca
