#pragma once
// The model zoo: every named binary PCA used by the experiments.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pca/core.hpp"

namespace pca {

class ParamRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace models {

// Majority(alpha) has several invariant measures for alpha at or above this
// value (directed bond percolation comparison). Recorded, not computed.
inline constexpr double kMajorityNonUniquenessAlpha = 0.996;

// (1-eps) delta_{x+y mod 2} + eps delta_{x+y+1 mod 2}, V = {0,1}.
LocalRule noisy_xor(double eps);

// alpha delta_{max} + (1-alpha) delta_0 over the given neighborhood.
LocalRule percolation(std::vector<int> offsets, double alpha);
LocalRule stavskaya(double alpha);

// alpha delta_{maj(x,y,z)} + (1-alpha) delta_{1-y}, V = {-1,0,1}.
LocalRule majority(double alpha);
// majority with every input letter swapped.
LocalRule minority(double alpha);

// alpha delta_{flip-if-not-all-equal(x,y,z)} + (1-alpha) delta_y (ECA 178).
LocalRule finae(double alpha);

// Unique but non-attractive invariant measure specimen, V = {0,1}.
LocalRule chma10();

// Every row equal to `law`, over the given neighborhood.
LocalRule constant(int alphabet_size, std::vector<int> offsets, std::vector<double> law);

}  // namespace models

struct ModelSpec {
  std::string name;
  std::string parameter;  // "alpha", "epsilon" or empty
  std::string summary;
  std::function<LocalRule(double)> make;
};

// Zoo lookup used by the CLI. Throws std::invalid_argument on unknown names.
const std::vector<ModelSpec>& zoo();
const ModelSpec& find_model(const std::string& name);

}  // namespace pca
