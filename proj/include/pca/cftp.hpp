#pragma once
// Coupling-from-the-past samplers for binary and small-alphabet PCA:
// the all-states (basic) scheme and the envelope scheme, each on a ring and on
// Z through dependence cones.
//
// Noise convention: the step from time j to j+1 (j < 0) reads
// uniform_at(seed, j, k) for cell k, whatever the restart horizon.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pca/core.hpp"
#include "pca/envelope.hpp"

namespace pca {

class StateSpaceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Restart horizons 1, 2, 4, ... doubling up to and including max_depth.
struct SamplerBudget {
  Time max_depth = Time{1} << 16;

  std::vector<Time> horizons() const;
};

// Optional instrumentation: called for every noise value a sampler reads.
using NoiseObserver = std::function<void(Time t, Cell k, double value)>;

struct SamplerOptions {
  SamplerBudget budget;
  const NoiseObserver* observer = nullptr;
  // Cap on the number of enumerated states of the basic samplers.
  std::size_t state_guard = std::size_t{1} << 20;
};

enum class SampleStatus { Coalesced, Timeout };

struct PerfectSample {
  SampleStatus status = SampleStatus::Timeout;
  std::vector<Cell> cells;       // target window
  std::vector<Letter> letters;   // empty on timeout
  Time depth = 0;                // horizon that coalesced, or the deepest tried
  int restarts = 0;              // horizons tried
  double seconds = 0.0;

  bool coalesced() const { return status == SampleStatus::Coalesced; }
};

// V_{-t}(K): t-fold Minkowski sum of the offsets with K, on Z.
std::vector<Cell> dependence_cone(std::span<const Cell> target, std::span<const int> offsets, Time t);
// Same on the ring Z/nZ (sorted, wrapped indices).
std::vector<Cell> dependence_cone(std::span<const Cell> target, std::span<const int> offsets, Time t, Cell ring);

PerfectSample cftp_basic_finite(const LocalRule& rule, Cell n, std::uint64_t seed, const SamplerOptions& options = {});
PerfectSample cftp_basic_infinite(const LocalRule& rule, std::span<const Cell> target, std::uint64_t seed,
                                  const SamplerOptions& options = {});

PerfectSample sample_epca_finite(const EnvelopeRule& env, Cell n, std::uint64_t seed,
                                 const SamplerOptions& options = {});
PerfectSample sample_epca_finite(const LocalRule& rule, Cell n, std::uint64_t seed,
                                 const SamplerOptions& options = {});
PerfectSample sample_epca_infinite(const EnvelopeRule& env, std::span<const Cell> target, std::uint64_t seed,
                                   const SamplerOptions& options = {});
PerfectSample sample_epca_infinite(const LocalRule& rule, std::span<const Cell> target, std::uint64_t seed,
                                   const SamplerOptions& options = {});

// Envelope trajectory started from the all-full configuration at time -horizon,
// returned at time 0. Building blocks of the envelope samplers.
std::vector<LetterSet> envelope_run_finite(const EnvelopeRule& env, Cell n, std::uint64_t seed, Time horizon,
                                           const NoiseObserver* observer = nullptr);
std::vector<LetterSet> envelope_run_infinite(const EnvelopeRule& env, std::span<const Cell> target,
                                             std::uint64_t seed, Time horizon,
                                             const NoiseObserver* observer = nullptr);

}  // namespace pca
