#pragma once
// Envelope PCA over the subset alphabet B = 2^A \ {emptyset}.
//
// A subset is a bit mask (bit a set <=> letter a possible). Envelope letters
// are indexed by mask - 1, so for a binary alphabet 0 = {0}, 1 = {1} and
// 2 = {0,1} ("?"). Envelope words are encoded in base |B| with the first
// offset most significant, mirroring LocalRule.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pca/core.hpp"

namespace pca {

using LetterSet = std::uint16_t;

constexpr LetterSet singleton(Letter a) { return static_cast<LetterSet>(1u << a); }
constexpr LetterSet full_set(int alphabet_size) { return static_cast<LetterSet>((1u << alphabet_size) - 1u); }
constexpr bool is_singleton(LetterSet s) { return s != 0 && (s & (s - 1)) == 0; }
constexpr bool contains(LetterSet s, Letter a) { return (s >> a) & 1u; }
Letter single_letter(LetterSet s);

inline constexpr LetterSet kZero = 0b01;
inline constexpr LetterSet kOne = 0b10;
inline constexpr LetterSet kUnknown = 0b11;

class EnvelopeNegative : public std::runtime_error {
 public:
  EnvelopeNegative(std::size_t word, LetterSet subset, double value);
  std::size_t word() const { return word_; }
  LetterSet subset() const { return subset_; }

 private:
  std::size_t word_;
  LetterSet subset_;
};

// Image set of the canonical update as a step function of r: segment i covers
// [upper_{i-1}, upper_i) and yields `set`.
struct EnvelopeSegment {
  double upper;
  LetterSet set;
};

class EnvelopeRule {
 public:
  const LocalRule& base() const { return *base_; }
  int alphabet_size() const { return base_->alphabet_size(); }
  int num_letters() const { return (1 << alphabet_size()) - 1; }
  std::size_t arity() const { return base_->arity(); }
  const std::vector<int>& offsets() const { return base_->offsets(); }
  std::size_t num_words() const { return num_words_; }
  bool binary() const { return alphabet_size() == 2; }

  std::size_t encode(std::span<const LetterSet> word) const;
  std::vector<LetterSet> decode(std::size_t word) const;

  // env(f)(word) as a vector indexed by mask - 1.
  std::span<const double> probabilities(std::size_t word) const {
    return {probs_.data() + word * num_letters(), static_cast<std::size_t>(num_letters())};
  }
  std::span<const EnvelopeSegment> segments(std::size_t word) const {
    return {segs_.data() + seg_begin_[word], seg_begin_[word + 1] - seg_begin_[word]};
  }

  LetterSet update(std::size_t word, double r) const {
    if (binary()) return r < lo_[word] ? kZero : (r >= hi_[word] ? kOne : kUnknown);
    for (const auto& s : segments(word))
      if (r < s.upper) return s.set;
    return segs_[seg_begin_[word + 1] - 1].set;
  }

  // Binary thresholds: 0 below `low`, 1 at or above `high`, ? in between.
  double low(std::size_t word) const { return lo_.at(word); }
  double high(std::size_t word) const { return hi_.at(word); }

  std::size_t all_unknown_word() const { return num_words_ - 1; }
  // True when the all-full word maps to the full set for every r, so the
  // all-full configuration is absorbing for a homogeneous envelope.
  bool unknown_absorbing() const;

 private:
  friend EnvelopeRule build_envelope_binary(const LocalRule&);
  friend EnvelopeRule build_envelope_general(const LocalRule&);
  explicit EnvelopeRule(const LocalRule& base);
  void finish_binary_thresholds();

  std::shared_ptr<const LocalRule> base_;
  std::size_t num_words_ = 0;
  std::vector<double> probs_;
  std::vector<std::uint32_t> seg_begin_;
  std::vector<EnvelopeSegment> segs_;
  std::vector<double> lo_, hi_;
};

// Direct construction from the min over the words each envelope word covers.
EnvelopeRule build_envelope_binary(const LocalRule& rule);
// Inclusion-exclusion construction for any alphabet up to 16 letters.
EnvelopeRule build_envelope_general(const LocalRule& rule);
// Binary rules go through build_envelope_binary, others through the general one.
EnvelopeRule build_envelope(const LocalRule& rule);

LetterSet envelope_update(const EnvelopeRule& env, std::span<const LetterSet> word, double r);
// { update_cell(rule, x, r) : x in word }, by enumeration.
LetterSet envelope_update_setimage(const LocalRule& rule, std::span<const LetterSet> word, double r);

bool is_envelope_ergodic_finite(const LocalRule& rule);

struct ErgodicityVerdict {
  enum class Kind { ErgodicCertified, NonErgodicCertified, Unknown };
  Kind kind = Kind::Unknown;
  double unknown_mass = 0.0;   // env(f)(?^V)(?)
  double min_unknown = 0.0;    // min over words with a ? of env(f)(y)(?)
  double bound = 0.0;          // the threshold that fired (1/|V|, 53/54 or 1)
  std::string reason;
};

inline constexpr double kPercolationUpperBound = 53.0 / 54.0;

ErgodicityVerdict envelope_ergodicity_bounds(const LocalRule& rule);
std::string to_string(ErgodicityVerdict::Kind kind);

nlohmann::json envelope_to_json(const EnvelopeRule& env);
std::string envelope_letter_name(LetterSet s, int alphabet_size);

}  // namespace pca
