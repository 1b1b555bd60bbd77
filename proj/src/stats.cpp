#include "pca/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pca/models.hpp"

namespace pca {

double WilsonInterval::standard_error() const {
  return trials == 0 ? 0.0 : std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0 || successes > trials)
    throw ParamRange("wilson_interval needs 0 <= successes <= trials and trials >= 1, got " +
                     std::to_string(successes) + "/" + std::to_string(trials));
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.estimate = p;
  w.successes = successes;
  w.trials = trials;
  w.low = successes == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
  w.high = successes == trials ? 1.0 : std::clamp(center + half, p, 1.0);
  return w;
}

}  // namespace pca
