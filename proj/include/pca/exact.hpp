#pragma once
// Brute-force oracle for finite rings and NH-PCA: dense transition matrices,
// stationary distributions per terminal component, ergodicity verdicts.
//
// State encoding: the configuration read left to right (cell 0, or the
// smallest NH cell index, first) as a base-|A| number, most significant first.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pca/core.hpp"
#include "pca/nhpca.hpp"

namespace pca {

class ParityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense matrices above this many states are refused (StateSpaceGuard). At the
// cap a matrix takes 2 GiB and a full solve is very slow.
inline constexpr std::size_t kDenseStateGuard = std::size_t{1} << 14;

class TransitionMatrix {
 public:
  TransitionMatrix(int alphabet_size, std::size_t cells, Eigen::MatrixXd q);

  std::size_t states() const { return static_cast<std::size_t>(q_.rows()); }
  std::size_t cells() const { return cells_; }
  int alphabet_size() const { return k_; }
  double operator()(std::size_t from, std::size_t to) const { return q_(from, to); }
  const Eigen::MatrixXd& matrix() const { return q_; }

  std::size_t encode(std::span<const Letter> config) const;
  std::vector<Letter> decode(std::size_t state) const;
  std::string label(std::size_t state) const;

 private:
  int k_;
  std::size_t cells_;
  Eigen::MatrixXd q_;
};

TransitionMatrix transition_matrix(const LocalRule& rule, Cell n);
TransitionMatrix transition_matrix(const NhPca& nh);

struct StationaryReport {
  // One stationary vector per terminal strongly connected component, each
  // supported on its component.
  std::vector<std::vector<double>> distributions;
  std::vector<std::vector<std::size_t>> terminal_components;
  std::vector<int> periods;
  bool ergodic = false;
  double residual = 0.0;  // max over vectors of ||pi Q - pi||_inf

  bool unique() const { return distributions.size() == 1; }
};

StationaryReport stationary(const TransitionMatrix& q);

// Cesaro-averaged power iteration from the uniform vector; cross-check only.
std::vector<double> stationary_power(const TransitionMatrix& q, int iterations);

// Majority(alpha) on Z/nZ: even n gives (delta_{(01)^{n/2}} + delta_{(10)^{n/2}})/2
// and a period-2 terminal pair; odd n gives a unique, ergodic, fully supported law.
bool verify_parity_theorem(double alpha, Cell n);

// Permutation matrix of flip-odd (odd = true) or flip-even on ring states.
Eigen::MatrixXd flip_permutation(Cell n, bool odd);
// Q_Majority(alpha) == Pi_odd * Q_FINAE(alpha) * Pi_even within 1e-12.
bool verify_flip_conjugacy(double alpha, Cell n);

// "state,configuration,probability" rows for every state.
std::string stationary_csv(const TransitionMatrix& q, std::span<const double> pi);

}  // namespace pca
