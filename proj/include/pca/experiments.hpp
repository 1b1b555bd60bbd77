#pragma once
// Experiment drivers behind the command-line tool: the c_n curve for
// Majority restrictions, shift correlation decay, space-time diagram images
// and ergodicity reports. CSV headers are fixed.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pca/cftp.hpp"
#include "pca/core.hpp"
#include "pca/stats.hpp"

namespace pca {

class WindowTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Desk-scale grid and the original full-scale configuration.
inline const std::vector<Cell> kDeskSizes{4, 8, 16, 32, 64, 128};
inline constexpr std::uint64_t kDeskSamples = 1000;
inline const std::vector<Cell> kFullSizes{4, 8, 16, 32, 64, 128, 256, 512, 1024};
inline constexpr std::uint64_t kFullSamples = 10000;
// Five alpha values; only 0.3 and 0.5 are named in the source material, the
// three in between are a guess.
inline const std::vector<double> kDefaultAlphaGrid{0.3, 0.35, 0.4, 0.45, 0.5};

struct CnConfig {
  std::vector<double> alphas{0.5};
  std::vector<Cell> sizes = kDeskSizes;
  std::uint64_t samples = kDeskSamples;
  std::uint64_t seed = 1;
  // Restrictions with alpha near 0.3 and n = 128 occasionally need horizons past 2^16.
  Time max_depth = Time{1} << 18;
  unsigned workers = 0;  // 0: one per hardware thread
};

struct CnRow {
  double alpha = 0.0;
  Cell n = 0;
  std::uint64_t samples = 0;
  std::uint64_t count_00 = 0;
  std::uint64_t count_11 = 0;
  std::uint64_t count_other = 0;
  std::uint64_t timeouts = 0;
  WilsonInterval cn;  // over coalesced samples
  Time max_depth = 0;  // deepest coalescing horizon among the samples
  double seconds = 0.0;
};

using Progress = std::function<void(const std::string&)>;

// c_n for restrict(majority(alpha), {-n..n}, uniform) sampled by envelope CFTP.
// n = 0 throws WindowTooSmall (cells 0 and 1 must both lie in the domain).
std::vector<CnRow> experiment_cn(const CnConfig& config, const Progress& progress = {});
std::string cn_csv(const std::vector<CnRow>& rows);
// True when some row lost at least half of its samples to timeouts.
bool timeout_dominated(const std::vector<CnRow>& rows);

// Cylinder {x_c = a for every (c, a)}; the empty cylinder is the whole space.
struct Cylinder {
  std::vector<std::pair<Cell, Letter>> constraints;
  Cylinder shifted(Cell n) const;
  bool matches(std::span<const Cell> cells, std::span<const Letter> letters) const;
};
Cylinder parse_cylinder(const std::string& text);  // "0:1,2:0"

struct DecayConfig {
  Cylinder u;
  Cylinder w;
  std::vector<Cell> shifts;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  Time max_depth = Time{1} << 16;
  unsigned workers = 0;
};

struct DecayRow {
  Cell shift = 0;
  std::uint64_t samples = 0;
  std::uint64_t timeouts = 0;
  WilsonInterval p_u, p_w, p_uw;  // p_w is the shifted cylinder
  double covariance = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Time max_depth = 0;
  bool contains_zero() const { return ci_low <= 0.0 && 0.0 <= ci_high; }
};

// mu(U and tau^{-n} W) - mu(U) mu(W) from perfect samples of the window
// covering U and W + n. The interval combines the three Wilson intervals
// conservatively; an empty cylinder gives exactly 0.
std::vector<DecayRow> experiment_correlation_decay(const LocalRule& rule, const DecayConfig& config,
                                                   const Progress& progress = {});
std::string decay_csv(const std::vector<DecayRow>& rows);

// Plain PGM (P2), maxval 255, gray = letter * 255 / (k - 1).
std::string render_pgm(const SpaceTimeDiagram& diagram, int alphabet_size);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

// Finite-cells EPCA criterion plus the infinite-lattice verdict.
std::string check_ergodicity(const LocalRule& rule, const std::string& name = "");

}  // namespace pca
