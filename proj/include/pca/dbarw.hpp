#pragma once
// Discrete-time double branching annihilating random walk and the
// FINAE / DBARW time-reversal duality, checked by paired Monte Carlo.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pca/core.hpp"
#include "pca/noise.hpp"
#include "pca/stats.hpp"

namespace pca {

// Occupied sites, sorted and distinct.
struct ParticleState {
  std::vector<Cell> occupied;

  // Reduces a multiset of positions to the sites holding an odd count.
  static ParticleState from_positions(std::vector<Cell> positions);
  std::size_t size() const { return occupied.size(); }
  bool empty() const { return occupied.empty(); }
  bool operator==(const ParticleState&) const = default;
};

// Requires 0 < alpha <= 2/3; throws ParamRange otherwise.
struct DbarwParams {
  explicit DbarwParams(double alpha);
  double alpha;
};

enum class DbarwMove { Left, Right, Branch, Stay };

// [0, a/2) left, [a/2, a) right, [a, 3a/2) branch, rest stay.
DbarwMove dbarw_move(const DbarwParams& params, double u);

// uniforms[i] drives the i-th particle of state.occupied. All moves resolve
// before per-site parity annihilation.
ParticleState dbarw_step(const ParticleState& state, const DbarwParams& params, std::span<const double> uniforms);
ParticleState dbarw_step(const ParticleState& state, const DbarwParams& params, const NoiseRow& row);

// One trial of each side. Step s reads NoiseRow(seed, s).
bool finae_two_point_trial(double alpha, std::span<const Cell> a, Cell k, Cell l, Time t, std::uint64_t seed);
ParticleState dbarw_run(ParticleState state, const DbarwParams& params, Time t, std::uint64_t seed);

// P(x_k^t != x_l^t) for FINAE(alpha) from 1_A, on the dependence cone of {k, l}.
WilsonInterval finae_two_point(double alpha, std::span<const Cell> a, Cell k, Cell l, Time t, std::uint64_t trials,
                               std::uint64_t seed);
// P(sum_{i in A} y_i^t odd) for DBARW(alpha) from particles at k and l.
WilsonInterval dbarw_parity(double alpha, Cell k, Cell l, std::span<const Cell> a, Time t, std::uint64_t trials,
                            std::uint64_t seed);
// P(exists i in A with y_i^t = 1), the upper side of the duality inequality.
WilsonInterval dbarw_occupied(double alpha, Cell k, Cell l, std::span<const Cell> a, Time t, std::uint64_t trials,
                              std::uint64_t seed);

struct DualityReport {
  WilsonInterval finae;
  WilsonInterval parity;
  WilsonInterval occupied;
  bool overlap = false;     // finae and parity intervals intersect
  bool inequality = false;  // finae.low <= occupied.high
  bool passed() const { return overlap && inequality; }
  // side,estimate,ci_low,ci_high
  std::string csv() const;
};

DualityReport duality_check(double alpha, std::span<const Cell> a, Cell k, Cell l, Time t, std::uint64_t trials,
                            std::uint64_t seed);

}  // namespace pca
