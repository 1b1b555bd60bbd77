#pragma once
// Binomial summaries. Every frequency the tools report goes through here.

#include <cstdint>

namespace pca {

inline constexpr double kWilsonZ = 1.959964;

struct WilsonInterval {
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  bool contains(double p) const { return low <= p && p <= high; }
  bool overlaps(const WilsonInterval& o) const { return low <= o.high && o.low <= high; }
  // sqrt(p(1-p)/n) at the point estimate.
  double standard_error() const;
};

// 95% score interval. Throws ParamRange unless 0 <= successes <= trials, trials >= 1.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

}  // namespace pca
