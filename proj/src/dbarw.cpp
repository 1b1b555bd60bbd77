#include "pca/dbarw.hpp"

#include <algorithm>
#include <sstream>

#include "pca/models.hpp"
#include "pca/parallel.hpp"

namespace pca {

namespace {

std::uint64_t count_trials(std::uint64_t trials, std::uint64_t seed, auto&& trial) {
  std::vector<char> hit(trials, 0);
  parallel_for(trials, [&](std::uint64_t i) { hit[i] = trial(derive_seed(seed, i)) ? 1 : 0; });
  return static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
}

ParticleState start_pair(Cell k, Cell l) { return ParticleState::from_positions({k, l}); }

}  // namespace

ParticleState ParticleState::from_positions(std::vector<Cell> positions) {
  std::sort(positions.begin(), positions.end());
  ParticleState s;
  for (std::size_t i = 0; i < positions.size();) {
    std::size_t j = i;
    while (j < positions.size() && positions[j] == positions[i]) ++j;
    if ((j - i) % 2 == 1) s.occupied.push_back(positions[i]);
    i = j;
  }
  return s;
}

DbarwParams::DbarwParams(double a) : alpha(a) {
  if (!(a > 0.0 && a <= 2.0 / 3.0)) throw ParamRange("DBARW needs 0 < alpha <= 2/3, got " + std::to_string(a));
}

DbarwMove dbarw_move(const DbarwParams& p, double u) {
  const double h = p.alpha / 2.0;
  if (u < h) return DbarwMove::Left;
  if (u < 2.0 * h) return DbarwMove::Right;
  if (u < 3.0 * h) return DbarwMove::Branch;
  return DbarwMove::Stay;
}

ParticleState dbarw_step(const ParticleState& state, const DbarwParams& params, std::span<const double> uniforms) {
  if (uniforms.size() < state.size()) throw std::invalid_argument("dbarw_step needs one uniform per particle");
  std::vector<Cell> moved;
  moved.reserve(3 * state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const Cell k = state.occupied[i];
    switch (dbarw_move(params, uniforms[i])) {
      case DbarwMove::Left: moved.push_back(k - 1); break;
      case DbarwMove::Right: moved.push_back(k + 1); break;
      case DbarwMove::Branch:
        moved.push_back(k - 1);
        moved.push_back(k);
        moved.push_back(k + 1);
        break;
      case DbarwMove::Stay: moved.push_back(k); break;
    }
  }
  return ParticleState::from_positions(std::move(moved));
}

ParticleState dbarw_step(const ParticleState& state, const DbarwParams& params, const NoiseRow& row) {
  std::vector<double> u(state.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = row(static_cast<Cell>(i));
  return dbarw_step(state, params, u);
}

ParticleState dbarw_run(ParticleState state, const DbarwParams& params, Time t, std::uint64_t seed) {
  for (Time s = 0; s < t && !state.empty(); ++s) state = dbarw_step(state, params, NoiseRow(seed, s));
  return state;
}

bool finae_two_point_trial(double alpha, std::span<const Cell> a, Cell k, Cell l, Time t, std::uint64_t seed) {
  if (t < 0) throw std::invalid_argument("negative time");
  // FINAE has offsets {-1,0,1}, so the cone of {k,l} at depth t is [lo-t, hi+t].
  const LocalRule rule = models::finae(alpha);
  const Cell lo = std::min(k, l), hi = std::max(k, l);
  Cell first = lo - t;
  std::vector<Letter> cur(static_cast<std::size_t>(hi - lo + 2 * t + 1), 0);
  for (Cell c : a)
    if (c >= first && c < first + static_cast<Cell>(cur.size())) cur[c - first] = 1;
  std::vector<Letter> next;
  for (Time s = 0; s < t; ++s) {
    const NoiseRow row(seed, s);
    next.assign(cur.size() - 2, 0);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const std::size_t w = (std::size_t{cur[i]} << 2) | (std::size_t{cur[i + 1]} << 1) | cur[i + 2];
      next[i] = rule.update(w, row(first + 1 + static_cast<Cell>(i)));
    }
    cur.swap(next);
    ++first;
  }
  return cur[k - first] != cur[l - first];
}

WilsonInterval finae_two_point(double alpha, std::span<const Cell> a, Cell k, Cell l, Time t, std::uint64_t trials,
                               std::uint64_t seed) {
  const std::vector<Cell> set(a.begin(), a.end());
  return wilson_interval(
      count_trials(trials, seed, [&](std::uint64_t s) { return finae_two_point_trial(alpha, set, k, l, t, s); }),
      trials);
}

WilsonInterval dbarw_parity(double alpha, Cell k, Cell l, std::span<const Cell> a, Time t, std::uint64_t trials,
                            std::uint64_t seed) {
  const DbarwParams p(alpha);
  const std::vector<Cell> set(a.begin(), a.end());
  return wilson_interval(count_trials(trials, seed,
                                      [&](std::uint64_t s) {
                                        const ParticleState y = dbarw_run(start_pair(k, l), p, t, s);
                                        std::size_t odd = 0;
                                        for (Cell c : set) odd += std::binary_search(y.occupied.begin(), y.occupied.end(), c);
                                        return odd % 2 == 1;
                                      }),
                         trials);
}

WilsonInterval dbarw_occupied(double alpha, Cell k, Cell l, std::span<const Cell> a, Time t, std::uint64_t trials,
                              std::uint64_t seed) {
  const DbarwParams p(alpha);
  const std::vector<Cell> set(a.begin(), a.end());
  return wilson_interval(count_trials(trials, seed,
                                      [&](std::uint64_t s) {
                                        const ParticleState y = dbarw_run(start_pair(k, l), p, t, s);
                                        return std::any_of(set.begin(), set.end(), [&](Cell c) {
                                          return std::binary_search(y.occupied.begin(), y.occupied.end(), c);
                                        });
                                      }),
                         trials);
}

DualityReport duality_check(double alpha, std::span<const Cell> a, Cell k, Cell l, Time t, std::uint64_t trials,
                            std::uint64_t seed) {
  const DbarwParams p(alpha);
  std::vector<Cell> set(a.begin(), a.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  DualityReport r;
  r.finae = finae_two_point(p.alpha, set, k, l, t, trials, derive_seed(seed, 0));
  // The parity and occupancy events are read off the same DBARW trajectories.
  r.parity = dbarw_parity(p.alpha, k, l, set, t, trials, derive_seed(seed, 1));
  r.occupied = dbarw_occupied(p.alpha, k, l, set, t, trials, derive_seed(seed, 1));
  r.overlap = r.finae.overlaps(r.parity);
  r.inequality = r.finae.low <= r.occupied.high;
  return r;
}

std::string DualityReport::csv() const {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << "side,estimate,ci_low,ci_high\n";
  auto line = [&](const char* side, const WilsonInterval& w) {
    os << side << ',' << w.estimate << ',' << w.low << ',' << w.high << '\n';
  };
  line("finae", finae);
  line("dbarw_parity", parity);
  line("dbarw_occupied", occupied);
  return os.str();
}

}  // namespace pca
