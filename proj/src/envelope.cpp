#include "pca/envelope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace pca {

namespace {

constexpr double kNegativeTolerance = 1e-12;
constexpr std::size_t kMaxEnvelopeEntries = std::size_t{1} << 24;
constexpr std::size_t kMaxArity = 12;

// Sentinel upper end of the last segment; every r in [0,1) is below it.
constexpr double kTop = 2.0;

std::vector<EnvelopeSegment> base_segments(const LocalRule& rule, std::size_t row) {
  std::vector<EnvelopeSegment> out;
  double prev = 0.0;
  for (int a = 0; a < rule.alphabet_size(); ++a) {
    const double c = rule.cutoff(row, static_cast<Letter>(a));
    if (c > prev) out.push_back({c, singleton(static_cast<Letter>(a))});
    prev = std::max(prev, c);
  }
  return out;
}

// Pointwise union of two step functions over [0,1).
std::vector<EnvelopeSegment> merge_union(std::span<const EnvelopeSegment> a, std::span<const EnvelopeSegment> b) {
  std::vector<EnvelopeSegment> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double upper = std::min(a[i].upper, b[j].upper);
    const LetterSet set = a[i].set | b[j].set;
    if (!out.empty() && out.back().set == set) out.back().upper = upper;
    else out.push_back({upper, set});
    if (a[i].upper == upper) ++i;
    if (b[j].upper == upper) ++j;
  }
  return out;
}

std::size_t checked_word_count(const LocalRule& rule) {
  if (rule.arity() > kMaxArity)
    throw std::invalid_argument("envelope tables are limited to neighborhoods of at most 12 cells");
  const std::size_t letters = (std::size_t{1} << rule.alphabet_size()) - 1;
  std::size_t words = 1;
  for (std::size_t i = 0; i < rule.arity(); ++i) {
    words *= letters;
    if (words * letters > kMaxEnvelopeEntries) throw std::invalid_argument("envelope table too large");
  }
  return words;
}

}  // namespace

Letter single_letter(LetterSet s) {
  if (!is_singleton(s)) throw std::invalid_argument("letter set is not a singleton");
  return static_cast<Letter>(std::countr_zero(static_cast<unsigned>(s)));
}

EnvelopeNegative::EnvelopeNegative(std::size_t word, LetterSet subset, double value)
    : std::runtime_error("inclusion-exclusion envelope mass " + std::to_string(value) + " < 0 at word " +
                         std::to_string(word) + ", subset mask " + std::to_string(subset)),
      word_(word),
      subset_(subset) {}

EnvelopeRule::EnvelopeRule(const LocalRule& base)
    : base_(std::make_shared<const LocalRule>(base)), num_words_(checked_word_count(base)) {}

std::size_t EnvelopeRule::encode(std::span<const LetterSet> word) const {
  if (word.size() != arity()) throw std::invalid_argument("envelope word length != neighborhood size");
  const LetterSet full = full_set(alphabet_size());
  std::size_t index = 0;
  for (LetterSet s : word) {
    if (s == 0 || (s & ~full) != 0) throw std::invalid_argument("invalid envelope letter");
    index = index * num_letters() + (s - 1u);
  }
  return index;
}

std::vector<LetterSet> EnvelopeRule::decode(std::size_t word) const {
  std::vector<LetterSet> out(arity());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<LetterSet>(word % num_letters() + 1);
    word /= num_letters();
  }
  return out;
}

bool EnvelopeRule::unknown_absorbing() const {
  auto segs = segments(all_unknown_word());
  return segs.size() == 1 && segs[0].set == full_set(alphabet_size());
}

void EnvelopeRule::finish_binary_thresholds() {
  lo_.assign(num_words_, 0.0);
  hi_.assign(num_words_, kTop);
  for (std::size_t w = 0; w < num_words_; ++w) {
    auto segs = segments(w);
    if (segs.front().set == kZero) lo_[w] = segs.front().upper;
    if (segs.back().set == kOne) hi_[w] = segs.size() >= 2 ? segs[segs.size() - 2].upper : 0.0;
  }
}

EnvelopeRule build_envelope_binary(const LocalRule& rule) {
  if (rule.alphabet_size() != 2) throw std::invalid_argument("build_envelope_binary needs a binary alphabet");
  EnvelopeRule env(rule);
  const std::size_t m = rule.arity();
  env.probs_.resize(env.num_words_ * 3);
  env.lo_.resize(env.num_words_);
  env.hi_.resize(env.num_words_);
  env.seg_begin_.reserve(env.num_words_ + 1);

  std::vector<LetterSet> word;
  std::vector<std::size_t> choice(m);
  for (std::size_t w = 0; w < env.num_words_; ++w) {
    word = env.decode(w);
    // Enumerate x in word with an odometer over the positions holding "?".
    std::vector<std::size_t> free;
    std::size_t fixed_row = 0;
    for (std::size_t i = 0; i < m; ++i) {
      fixed_row <<= 1;
      if (word[i] == kUnknown) free.push_back(m - 1 - i);
      else if (word[i] == kOne) fixed_row |= 1;
    }
    double q0 = 1.0, q1 = 1.0, lo = kTop, hi = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
      std::size_t row = fixed_row;
      for (std::size_t b = 0; b < free.size(); ++b)
        if ((mask >> b) & 1u) row |= std::size_t{1} << free[b];
      auto p = rule.row(row);
      q0 = std::min(q0, p[0]);
      q1 = std::min(q1, p[1]);
      lo = std::min(lo, rule.cutoff(row, 0));
      hi = std::max(hi, rule.cutoff(row, 0));
    }
    double qu = 1.0 - q0 - q1;
    if (qu < -kNegativeTolerance) throw EnvelopeNegative(w, kUnknown, qu);
    if (free.empty()) qu = 0.0;
    env.probs_[3 * w] = q0;
    env.probs_[3 * w + 1] = q1;
    env.probs_[3 * w + 2] = std::max(qu, 0.0);
    env.lo_[w] = lo;
    env.hi_[w] = hi;

    env.seg_begin_.push_back(static_cast<std::uint32_t>(env.segs_.size()));
    if (lo > 0.0) env.segs_.push_back({lo, kZero});
    if (hi > lo) env.segs_.push_back({hi, kUnknown});
    if (hi < kTop) env.segs_.push_back({kTop, kOne});
  }
  env.seg_begin_.push_back(static_cast<std::uint32_t>(env.segs_.size()));
  return env;
}

EnvelopeRule build_envelope_general(const LocalRule& rule) {
  EnvelopeRule env(rule);
  const int k = rule.alphabet_size();
  const std::size_t letters = static_cast<std::size_t>(env.num_letters());
  const std::size_t m = rule.arity();

  std::vector<std::size_t> weight(m, 1);
  for (std::size_t i = m; i-- > 1;) weight[i - 1] = weight[i] * letters;

  // alpha[w][S-1] = min over base words u covered by w of f(u)(S).
  std::vector<double> alpha(env.num_words_ * letters);
  std::vector<std::vector<EnvelopeSegment>> segs(env.num_words_);

  for (std::size_t w = 0; w < env.num_words_; ++w) {
    const std::vector<LetterSet> word = env.decode(w);
    std::size_t split = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!is_singleton(word[i])) {
        split = i;
        break;
      }
    double* aw = &alpha[w * letters];
    if (split == m) {
      std::vector<Letter> base(m);
      for (std::size_t i = 0; i < m; ++i) base[i] = single_letter(word[i]);
      const std::size_t row = rule.encode(base);
      auto p = rule.row(row);
      for (std::size_t s = 1; s <= letters; ++s) {
        const unsigned low = std::countr_zero(static_cast<unsigned>(s));
        const std::size_t rest = s & (s - 1);
        aw[s - 1] = (rest ? aw[rest - 1] : 0.0) + p[low];
      }
      segs[w] = base_segments(rule, row);
    } else {
      // Split the first non-singleton letter into its lowest letter and the rest;
      // both pieces have a smaller index, so their entries are already filled.
      const LetterSet s = word[split];
      const LetterSet low = s & static_cast<LetterSet>(-s);
      const LetterSet rest = s ^ low;
      const std::size_t w1 = w - (s - low) * weight[split];
      const std::size_t w2 = w - (s - rest) * weight[split];
      for (std::size_t t = 0; t < letters; ++t) aw[t] = std::min(alpha[w1 * letters + t], alpha[w2 * letters + t]);
      segs[w] = merge_union(segs[w1], segs[w2]);
    }
  }

  env.probs_.resize(env.num_words_ * letters);
  for (std::size_t w = 0; w < env.num_words_; ++w) {
    const double* aw = &alpha[w * letters];
    for (std::size_t y = 1; y <= letters; ++y) {
      double v = 0.0;
      const int py = std::popcount(static_cast<unsigned>(y));
      for (std::size_t x = y; x != 0; x = (x - 1) & y) {
        const int sign = ((py - std::popcount(static_cast<unsigned>(x))) & 1) ? -1 : 1;
        v += sign * aw[x - 1];
      }
      if (v < -kNegativeTolerance) throw EnvelopeNegative(w, static_cast<LetterSet>(y), v);
      env.probs_[w * letters + y - 1] = std::max(v, 0.0);
    }
  }

  env.seg_begin_.reserve(env.num_words_ + 1);
  for (auto& s : segs) {
    env.seg_begin_.push_back(static_cast<std::uint32_t>(env.segs_.size()));
    env.segs_.insert(env.segs_.end(), s.begin(), s.end());
  }
  env.seg_begin_.push_back(static_cast<std::uint32_t>(env.segs_.size()));
  if (k == 2) env.finish_binary_thresholds();
  return env;
}

EnvelopeRule build_envelope(const LocalRule& rule) {
  return rule.alphabet_size() == 2 ? build_envelope_binary(rule) : build_envelope_general(rule);
}

LetterSet envelope_update(const EnvelopeRule& env, std::span<const LetterSet> word, double r) {
  return env.update(env.encode(word), r);
}

LetterSet envelope_update_setimage(const LocalRule& rule, std::span<const LetterSet> word, double r) {
  const std::size_t m = rule.arity();
  if (word.size() != m) throw std::invalid_argument("envelope word length != neighborhood size");
  std::vector<std::vector<Letter>> choices(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (int a = 0; a < rule.alphabet_size(); ++a)
      if (contains(word[i], static_cast<Letter>(a))) choices[i].push_back(static_cast<Letter>(a));
    if (choices[i].empty()) throw std::invalid_argument("empty envelope letter");
  }
  std::vector<std::size_t> idx(m, 0);
  std::vector<Letter> x(m);
  LetterSet image = 0;
  while (true) {
    for (std::size_t i = 0; i < m; ++i) x[i] = choices[i][idx[i]];
    image |= singleton(update_cell(rule, x, r));
    std::size_t i = m;
    while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  return image;
}

bool is_envelope_ergodic_finite(const LocalRule& rule) {
  if (rule.alphabet_size() != 2) throw std::invalid_argument("finite EPCA criterion needs a binary alphabet");
  double min0 = 1.0, min1 = 1.0;
  for (std::size_t i = 0; i < rule.num_rows(); ++i) {
    min0 = std::min(min0, rule.row(i)[0]);
    min1 = std::min(min1, rule.row(i)[1]);
  }
  return min0 + min1 > 0.0;
}

ErgodicityVerdict envelope_ergodicity_bounds(const LocalRule& rule) {
  if (rule.alphabet_size() != 2) throw std::invalid_argument("ergodicity bounds need a binary alphabet");
  const EnvelopeRule env = build_envelope_binary(rule);
  ErgodicityVerdict v;
  v.unknown_mass = env.probabilities(env.all_unknown_word())[2];
  v.min_unknown = 1.0;
  for (std::size_t w = 0; w < env.num_words(); ++w) {
    const auto word = env.decode(w);
    if (std::any_of(word.begin(), word.end(), [](LetterSet s) { return s == kUnknown; }))
      v.min_unknown = std::min(v.min_unknown, env.probabilities(w)[2]);
  }
  const double lower = 1.0 / static_cast<double>(rule.arity());
  std::ostringstream os;
  if (env.unknown_absorbing()) {
    v.kind = ErgodicityVerdict::Kind::NonErgodicCertified;
    v.bound = 1.0;
    os << "env(f)(?^V)(?) = 1: the all-? configuration is absorbing";
  } else if (v.unknown_mass < lower) {
    v.kind = ErgodicityVerdict::Kind::ErgodicCertified;
    v.bound = lower;
    os << "env(f)(?^V)(?) = " << v.unknown_mass << " < 1/|V| = " << lower;
  } else if (v.min_unknown > kPercolationUpperBound) {
    v.kind = ErgodicityVerdict::Kind::NonErgodicCertified;
    v.bound = kPercolationUpperBound;
    os << "min env(f)(y)(?) over words with a ? = " << v.min_unknown << " > 53/54";
  } else {
    v.kind = ErgodicityVerdict::Kind::Unknown;
    os << "env(f)(?^V)(?) = " << v.unknown_mass << " >= 1/|V| = " << lower << " and min env(f)(y)(?) = "
       << v.min_unknown << " <= 53/54";
  }
  v.reason = os.str();
  return v;
}

std::string to_string(ErgodicityVerdict::Kind kind) {
  switch (kind) {
    case ErgodicityVerdict::Kind::ErgodicCertified: return "ErgodicCertified";
    case ErgodicityVerdict::Kind::NonErgodicCertified: return "NonErgodicCertified";
    case ErgodicityVerdict::Kind::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string envelope_letter_name(LetterSet s, int alphabet_size) {
  if (alphabet_size == 2) return s == kZero ? "0" : (s == kOne ? "1" : "?");
  std::string out = "{";
  for (int a = 0; a < alphabet_size; ++a)
    if (contains(s, static_cast<Letter>(a))) {
      if (out.size() > 1) out += ",";
      out += std::to_string(a);
    }
  return out + "}";
}

nlohmann::json envelope_to_json(const EnvelopeRule& env) {
  nlohmann::json letters = nlohmann::json::array();
  for (int s = 1; s <= env.num_letters(); ++s)
    letters.push_back(envelope_letter_name(static_cast<LetterSet>(s), env.alphabet_size()));
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t w = 0; w < env.num_words(); ++w) {
    auto p = env.probabilities(w);
    table.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"alphabet", env.alphabet_size()},
          {"neighborhood", env.offsets()},
          {"letters", letters},
          {"table", table}};
}

}  // namespace pca
