#include "pca/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pca/envelope.hpp"
#include "pca/models.hpp"
#include "pca/nhpca.hpp"
#include "pca/noise.hpp"
#include "pca/parallel.hpp"

namespace pca {

namespace {

enum class CnOutcome : std::uint8_t { Zero, One, Other, Timeout };

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<CnRow> experiment_cn(const CnConfig& config, const Progress& progress) {
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  for (Cell n : config.sizes) {
    if (n == 0) throw WindowTooSmall("c_0 needs cells 0 and 1 in the domain {-n..n}; use n >= 1");
    if (n < 0) throw std::invalid_argument("window sizes must be positive");
  }
  SamplerOptions opts;
  opts.budget.max_depth = config.max_depth;
  std::vector<CnRow> rows;
  for (double alpha : config.alphas) {
    const LocalRule rule = models::majority(alpha);
    for (Cell n : config.sizes) {
      const auto start = std::chrono::steady_clock::now();
      const NhSampler sampler(restrict(rule, -n, n, {0.5, 0.5}));
      const std::size_t p0 = sampler.pca().position(0), p1 = sampler.pca().position(1);
      const std::uint64_t base = derive_seed(config.seed, static_cast<std::uint64_t>(n));
      std::vector<CnOutcome> outcome(config.samples);
      std::vector<Time> depth(config.samples, 0);
      parallel_for(
          config.samples,
          [&](std::uint64_t i) {
            const PerfectSample s = sampler.sample(derive_seed(base, i), opts);
            if (!s.coalesced()) {
              outcome[i] = CnOutcome::Timeout;
              return;
            }
            depth[i] = s.depth;
            const Letter a = s.letters[p0], b = s.letters[p1];
            outcome[i] = a != b ? CnOutcome::Other : (a == 0 ? CnOutcome::Zero : CnOutcome::One);
          },
          config.workers);

      CnRow row;
      row.alpha = alpha;
      row.n = n;
      row.samples = config.samples;
      for (auto o : outcome) {
        switch (o) {
          case CnOutcome::Zero: ++row.count_00; break;
          case CnOutcome::One: ++row.count_11; break;
          case CnOutcome::Other: ++row.count_other; break;
          case CnOutcome::Timeout: ++row.timeouts; break;
        }
      }
      row.max_depth = *std::max_element(depth.begin(), depth.end());
      const std::uint64_t done = row.samples - row.timeouts;
      if (done > 0) {
        row.cn = wilson_interval(row.count_00 + row.count_11, done);
      } else {
        row.cn.low = 0.0;
        row.cn.high = 1.0;
      }
      row.seconds = seconds_since(start);
      if (progress) {
        std::ostringstream os;
        os << "alpha=" << alpha << " n=" << n << " c_n=" << row.cn.estimate << " timeouts=" << row.timeouts
           << " (" << std::fixed << std::setprecision(1) << row.seconds << " s)";
        progress(os.str());
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string cn_csv(const std::vector<CnRow>& rows) {
  std::ostringstream os;
  os << "alpha,n,samples,count_00,count_11,count_other,timeouts,c_n,ci_low,ci_high,max_depth\n";
  os << std::fixed;
  for (const auto& r : rows) {
    os << std::setprecision(4) << r.alpha << ',' << r.n << ',' << r.samples << ',' << r.count_00 << ','
       << r.count_11 << ',' << r.count_other << ',' << r.timeouts << ',' << std::setprecision(6) << r.cn.estimate
       << ',' << r.cn.low << ',' << r.cn.high << ',' << r.max_depth << '\n';
  }
  return os.str();
}

bool timeout_dominated(const std::vector<CnRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const CnRow& r) { return 2 * r.timeouts >= r.samples; });
}

Cylinder Cylinder::shifted(Cell n) const {
  Cylinder c = *this;
  for (auto& [cell, letter] : c.constraints) cell += n;
  return c;
}

bool Cylinder::matches(std::span<const Cell> cells, std::span<const Letter> letters) const {
  for (const auto& [cell, letter] : constraints) {
    const auto it = std::lower_bound(cells.begin(), cells.end(), cell);
    if (it == cells.end() || *it != cell) throw std::invalid_argument("cylinder cell outside the sampled window");
    if (letters[it - cells.begin()] != letter) return false;
  }
  return true;
}

Cylinder parse_cylinder(const std::string& text) {
  Cylinder c;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("cylinder entries look like cell:letter, got " + item);
    const long long cell = std::stoll(item.substr(0, colon));
    const int letter = std::stoi(item.substr(colon + 1));
    if (letter < 0 || letter >= kMaxAlphabet) throw std::invalid_argument("bad cylinder letter in " + item);
    c.constraints.emplace_back(static_cast<Cell>(cell), static_cast<Letter>(letter));
  }
  return c;
}

std::vector<DecayRow> experiment_correlation_decay(const LocalRule& rule, const DecayConfig& config,
                                                   const Progress& progress) {
  if (config.samples < 1) throw std::invalid_argument("samples must be at least 1");
  const EnvelopeRule env = build_envelope(rule);
  SamplerOptions opts;
  opts.budget.max_depth = config.max_depth;
  std::vector<DecayRow> rows;
  for (Cell shift : config.shifts) {
    DecayRow row;
    row.shift = shift;
    row.samples = config.samples;
    const Cylinder w = config.w.shifted(shift);
    if (config.u.constraints.empty() || config.w.constraints.empty()) {
      // One of the events is the whole space: the covariance vanishes identically.
      row.p_u = row.p_w = row.p_uw = wilson_interval(config.samples, config.samples);
      rows.push_back(row);
      continue;
    }
    std::vector<Cell> window;
    for (const auto& [c, a] : config.u.constraints) window.push_back(c);
    for (const auto& [c, a] : w.constraints) window.push_back(c);
    std::sort(window.begin(), window.end());
    window.erase(std::unique(window.begin(), window.end()), window.end());

    const std::uint64_t base = derive_seed(config.seed, static_cast<std::uint64_t>(shift));
    std::vector<std::uint8_t> hits(config.samples, 0);  // bit 0: U, bit 1: W, bit 2: timeout
    std::vector<Time> depth(config.samples, 0);
    parallel_for(
        config.samples,
        [&](std::uint64_t i) {
          const PerfectSample s = sample_epca_infinite(env, window, derive_seed(base, i), opts);
          if (!s.coalesced()) {
            hits[i] = 4;
            return;
          }
          depth[i] = s.depth;
          hits[i] = static_cast<std::uint8_t>((config.u.matches(s.cells, s.letters) ? 1 : 0) |
                                              (w.matches(s.cells, s.letters) ? 2 : 0));
        },
        config.workers);
    std::uint64_t nu = 0, nw = 0, nuw = 0;
    for (auto h : hits) {
      if (h & 4) {
        ++row.timeouts;
        continue;
      }
      nu += h & 1;
      nw += (h >> 1) & 1;
      nuw += (h & 3) == 3;
    }
    row.max_depth = *std::max_element(depth.begin(), depth.end());
    const std::uint64_t done = row.samples - row.timeouts;
    if (done == 0) throw std::runtime_error("every correlation sample timed out at shift " + std::to_string(shift));
    row.p_u = wilson_interval(nu, done);
    row.p_w = wilson_interval(nw, done);
    row.p_uw = wilson_interval(nuw, done);
    row.covariance = row.p_uw.estimate - row.p_u.estimate * row.p_w.estimate;
    row.ci_low = row.p_uw.low - row.p_u.high * row.p_w.high;
    row.ci_high = row.p_uw.high - row.p_u.low * row.p_w.low;
    if (progress) progress("shift " + std::to_string(shift) + " covariance " + std::to_string(row.covariance));
    rows.push_back(row);
  }
  return rows;
}

std::string decay_csv(const std::vector<DecayRow>& rows) {
  std::ostringstream os;
  os << "shift,samples,timeouts,p_u,p_u_low,p_u_high,p_w,p_w_low,p_w_high,p_uw,p_uw_low,p_uw_high,"
        "covariance,ci_low,ci_high,max_depth\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    os << r.shift << ',' << r.samples << ',' << r.timeouts;
    for (const auto* w : {&r.p_u, &r.p_w, &r.p_uw}) os << ',' << w->estimate << ',' << w->low << ',' << w->high;
    os << ',' << r.covariance << ',' << r.ci_low << ',' << r.ci_high << ',' << r.max_depth << '\n';
  }
  return os.str();
}

std::string render_pgm(const SpaceTimeDiagram& diagram, int alphabet_size) {
  if (alphabet_size < 2) throw std::invalid_argument("render_pgm needs an alphabet of size >= 2");
  const std::size_t width = diagram.rows.empty() ? 0 : diagram.rows.front().size();
  for (const auto& r : diagram.rows)
    if (r.size() != width) throw std::invalid_argument("diagram rows differ in width");
  std::ostringstream os;
  os << "P2\n" << width << ' ' << diagram.rows.size() << "\n255\n";
  for (const auto& r : diagram.rows) {
    for (std::size_t i = 0; i < width; ++i) {
      if (r.letters[i] >= alphabet_size) throw std::invalid_argument("letter outside the alphabet");
      os << (i ? " " : "") << r.letters[i] * 255 / (alphabet_size - 1);
    }
    os << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out.flush()) throw IoError("write to " + path.string() + " failed");
}

std::string check_ergodicity(const LocalRule& rule, const std::string& name) {
  std::ostringstream os;
  if (!name.empty()) os << "model: " << name << '\n';
  if (rule.alphabet_size() == 2) {
    os << "finite rings: EPCA " << (is_envelope_ergodic_finite(rule) ? "ergodic" : "non-ergodic")
       << " (all-? word " << (build_envelope(rule).unknown_absorbing() ? "absorbing" : "not absorbing") << ")\n";
  } else {
    os << "finite rings: criterion available for binary alphabets only\n";
  }
  const ErgodicityVerdict v = envelope_ergodicity_bounds(rule);
  os << "infinite lattice: " << to_string(v.kind) << '\n';
  os << "  env(?^V)(?) = " << v.unknown_mass << ", min over ?-words = " << v.min_unknown << '\n';
  os << "  bound: " << v.bound << " (" << v.reason << ")\n";
  return os.str();
}

}  // namespace pca
