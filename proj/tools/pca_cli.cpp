// pca: sampling, exact analysis and experiments for 1-D probabilistic cellular automata.
//
// Exit codes: 0 ok, 1 domain or input error, 2 run dominated by timeouts.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "pca/cftp.hpp"
#include "pca/dbarw.hpp"
#include "pca/envelope.hpp"
#include "pca/exact.hpp"
#include "pca/experiments.hpp"
#include "pca/model_io.hpp"
#include "pca/models.hpp"
#include "pca/noise.hpp"

namespace {

using namespace pca;

constexpr int kExitDomain = 1;
constexpr int kExitTimeouts = 2;

struct ModelArgs {
  std::string name;
  std::string file;
  std::optional<double> alpha;
  std::optional<double> epsilon;

  void attach(CLI::App* app) {
    app->add_option("--model", name, "zoo model name (see `pca models`)");
    app->add_option("--model-file", file, "JSON rule file");
    app->add_option("--alpha", alpha, "model parameter alpha");
    app->add_option("--epsilon", epsilon, "model parameter epsilon (noisy-xor)");
  }

  std::string label() const { return file.empty() ? name : file; }

  LocalRule load() const {
    if (!file.empty()) {
      if (!name.empty()) throw std::invalid_argument("give either --model or --model-file, not both");
      return load_rule(file);
    }
    if (name.empty()) throw std::invalid_argument("a model is required: --model NAME or --model-file PATH");
    const ModelSpec& spec = find_model(name);
    if (spec.parameter.empty()) return spec.make(0.0);
    const auto& value = spec.parameter == "epsilon" ? (epsilon ? epsilon : alpha) : (alpha ? alpha : epsilon);
    if (!value) throw std::invalid_argument("model " + name + " needs --" + spec.parameter);
    return spec.make(*value);
  }
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

Configuration initial_configuration(const std::string& init, Cell n, int k, std::uint64_t seed) {
  if (init == "random") {
    Configuration c{0, std::vector<Letter>(static_cast<std::size_t>(n))};
    for (Cell i = 0; i < n; ++i) c.letters[i] = static_cast<Letter>(uniform_at(seed ^ 0xa5a5a5a5ULL, -1, i) * k);
    return c;
  }
  if (init.size() == 1 && n > 1) return ring_configuration(std::string(static_cast<std::size_t>(n), init[0]));
  Configuration c = ring_configuration(init);
  if (static_cast<Cell>(c.size()) != n) throw std::invalid_argument("--init length differs from --n");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect sampling and exact analysis of probabilistic cellular automata"};
  app.require_subcommand(1);

  ModelArgs model;
  std::uint64_t seed = 1;
  std::string out;
  Cell n = 8;
  std::uint64_t samples = 1000;
  Time max_depth = Time{1} << 16;

  // models
  auto* list = app.add_subcommand("models", "list the model zoo");

  // simulate
  auto* sim = app.add_subcommand("simulate", "forward simulation on a ring");
  model.attach(sim);
  Time steps = 64;
  std::string init = "random";
  std::string pgm;
  sim->add_option("--n", n, "ring size")->check(CLI::PositiveNumber);
  sim->add_option("--steps", steps, "number of steps")->check(CLI::NonNegativeNumber);
  sim->add_option("--init", init, "initial word (digits), one repeated digit, or 'random'");
  sim->add_option("--seed", seed, "noise seed");
  sim->add_option("--pgm", pgm, "write the space-time diagram as a plain PGM");
  sim->add_option("--out", out, "text output (default stdout)");

  // sample
  auto* smp = app.add_subcommand("sample", "perfect samples by coupling from the past");
  model.attach(smp);
  std::string method = "envelope";
  bool on_ring = false;
  smp->add_option("--n", n, "ring size, or window {0..n-1} on Z")->check(CLI::PositiveNumber);
  smp->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);
  smp->add_option("--seed", seed, "base seed");
  smp->add_option("--max-depth", max_depth, "deepest restart horizon")->check(CLI::PositiveNumber);
  smp->add_option("--method", method, "envelope or basic")->check(CLI::IsMember({"envelope", "basic"}));
  smp->add_flag("--ring", on_ring, "sample the ring Z/nZ instead of a window of Z");
  smp->add_option("--out", out, "CSV output (default stdout)");

  // exact
  auto* ex = app.add_subcommand("exact", "stationary distributions on a ring by a dense linear solve");
  model.attach(ex);
  bool parity = false, conjugacy = false;
  ex->add_option("--n", n, "ring size")->check(CLI::PositiveNumber);
  ex->add_flag("--check-parity", parity, "check the even/odd Majority(alpha) statement for --n");
  ex->add_flag("--check-conjugacy", conjugacy, "check Majority = flip-odd . FINAE . flip-even for --n");
  ex->add_option("--out", out, "CSV output of the stationary vectors (default stdout)");

  // check
  auto* chk = app.add_subcommand("check", "envelope ergodicity criteria");
  model.attach(chk);

  // experiment-cn
  auto* cn = app.add_subcommand("experiment-cn", "c_n = mu_n{x0=x1} for restricted Majority(alpha)");
  std::vector<double> alphas;
  std::vector<Cell> sizes;
  bool full_scale = false;
  unsigned workers = 0;
  cn->add_option("--alpha", alphas,
                 "alpha values (default grid 0.3,0.35,0.4,0.45,0.5; the middle three values are a guess)")
      ->delimiter(',');
  cn->add_option("--n", sizes, "window half-widths (default 4,8,16,32,64,128)")->delimiter(',');
  cn->add_option("--samples", samples, "samples per point (default 1000)")->check(CLI::PositiveNumber);
  cn->add_option("--seed", seed, "base seed");
  Time cn_depth = CnConfig{}.max_depth;
  cn->add_option("--max-depth", cn_depth, "deepest restart horizon (default 2^18)")->check(CLI::PositiveNumber);
  cn->add_flag("--full-scale", full_scale, "original configuration: n up to 1024, 10000 samples (very long)");
  cn->add_option("--workers", workers, "worker threads (0: hardware)");
  cn->add_option("--out", out, "CSV output (default stdout)");

  // experiment-decay
  auto* dec = app.add_subcommand("experiment-decay", "shift covariance mu(U, tau^-n W) - mu(U)mu(W)");
  model.attach(dec);
  std::string cyl_u = "0:1", cyl_w = "0:1";
  std::vector<Cell> shifts;
  Cell max_shift = 16;
  dec->add_option("--u", cyl_u, "cylinder U as cell:letter,...");
  dec->add_option("--w", cyl_w, "cylinder W as cell:letter,...");
  dec->add_option("--shifts", shifts, "shift list")->delimiter(',');
  dec->add_option("--max-shift", max_shift, "shifts 1..max-shift when --shifts is absent");
  dec->add_option("--samples", samples, "samples per shift")->check(CLI::PositiveNumber);
  dec->add_option("--seed", seed, "base seed");
  dec->add_option("--max-depth", max_depth, "deepest restart horizon")->check(CLI::PositiveNumber);
  dec->add_option("--workers", workers, "worker threads (0: hardware)");
  dec->add_option("--out", out, "CSV output (default stdout)");

  // duality
  auto* dua = app.add_subcommand("duality", "FINAE two-point vs DBARW parity, paired Monte Carlo");
  double d_alpha = 0.5;
  std::vector<Cell> set_a{0};
  Cell k = 0, l = 1;
  Time t = 5;
  std::uint64_t trials = 100000;
  dua->add_option("--alpha", d_alpha, "alpha, at most 2/3");
  dua->add_option("--A", set_a, "initial FINAE ones / DBARW observation set")->delimiter(',');
  dua->add_option("--k", k, "first observed cell");
  dua->add_option("--l", l, "second observed cell");
  dua->add_option("--t", t, "time")->check(CLI::NonNegativeNumber);
  dua->add_option("--trials", trials, "trials per side")->check(CLI::PositiveNumber);
  dua->add_option("--seed", seed, "base seed");
  dua->add_option("--out", out, "CSV output (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "write a model or its envelope rule as JSON");
  model.attach(exp);
  bool envelope = false;
  exp->add_flag("--envelope", envelope, "export the envelope rule instead of the rule");
  exp->add_option("--out", out, "JSON output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& s : zoo())
        std::cout << std::left << std::setw(14) << s.name << std::setw(9) << (s.parameter.empty() ? "-" : s.parameter)
                  << s.summary << '\n';
      return 0;
    }

    if (sim->parsed()) {
      const LocalRule rule = model.load();
      const Configuration c0 = initial_configuration(init, n, rule.alphabet_size(), seed);
      const SpaceTimeDiagram d = simulate(rule, c0, steps, seed);
      if (!pgm.empty()) write_text_file(pgm, render_pgm(d, rule.alphabet_size()));
      std::ostringstream os;
      for (const auto& row : d.rows) os << to_string(row) << '\n';
      if (pgm.empty() || !out.empty()) emit(out, os.str());
      return 0;
    }

    if (smp->parsed()) {
      const LocalRule rule = model.load();
      SamplerOptions opts;
      opts.budget.max_depth = max_depth;
      std::vector<Cell> window(static_cast<std::size_t>(n));
      for (Cell i = 0; i < n; ++i) window[i] = i;
      const EnvelopeRule env = build_envelope(rule);
      std::ostringstream os;
      os << "sample,status,depth,configuration\n";
      std::uint64_t timeouts = 0;
      for (std::uint64_t i = 0; i < samples; ++i) {
        const std::uint64_t s = derive_seed(seed, i);
        PerfectSample p;
        if (method == "basic")
          p = on_ring ? cftp_basic_finite(rule, n, s, opts) : cftp_basic_infinite(rule, window, s, opts);
        else
          p = on_ring ? sample_epca_finite(env, n, s, opts) : sample_epca_infinite(env, window, s, opts);
        os << i << ',' << (p.coalesced() ? "coalesced" : "timeout") << ',' << p.depth << ','
           << (p.coalesced() ? to_string(Configuration{0, p.letters}) : "") << '\n';
        timeouts += !p.coalesced();
      }
      emit(out, os.str());
      if (2 * timeouts >= samples) {
        std::cerr << timeouts << " of " << samples << " samples timed out at max depth " << max_depth << '\n';
        return kExitTimeouts;
      }
      return 0;
    }

    if (ex->parsed()) {
      if (parity || conjugacy) {
        bool ok = true;
        const double a = model.alpha.value_or(0.5);
        if (parity) {
          const bool r = verify_parity_theorem(a, n);
          std::cout << "parity statement, alpha=" << a << " n=" << n << ": " << (r ? "holds" : "FAILS") << '\n';
          ok = ok && r;
        }
        if (conjugacy) {
          const bool r = verify_flip_conjugacy(a, n);
          std::cout << "flip conjugacy, alpha=" << a << " n=" << n << ": " << (r ? "holds" : "FAILS") << '\n';
          ok = ok && r;
        }
        return ok ? 0 : kExitDomain;
      }
      const LocalRule rule = model.load();
      const TransitionMatrix q = transition_matrix(rule, n);
      const StationaryReport rep = stationary(q);
      std::cerr << "states " << q.states() << ", terminal components " << rep.distributions.size() << ", periods";
      for (int p : rep.periods) std::cerr << ' ' << p;
      std::cerr << ", " << (rep.ergodic ? "ergodic" : "not ergodic") << ", residual " << rep.residual << '\n';
      std::ostringstream os;
      for (std::size_t c = 0; c < rep.distributions.size(); ++c) {
        std::string csv = stationary_csv(q, rep.distributions[c]);
        if (c > 0) csv.erase(0, csv.find('\n') + 1);
        std::istringstream lines(csv);
        std::string line;
        bool header = true;
        while (std::getline(lines, line)) {
          if (header && c == 0) {
            os << "component," << line << '\n';
            header = false;
            continue;
          }
          header = false;
          os << c << ',' << line << '\n';
        }
      }
      emit(out, os.str());
      return 0;
    }

    if (chk->parsed()) {
      std::cout << check_ergodicity(model.load(), model.label());
      return 0;
    }

    if (cn->parsed()) {
      CnConfig cfg;
      cfg.alphas = alphas.empty() ? kDefaultAlphaGrid : alphas;
      cfg.sizes = !sizes.empty() ? sizes : (full_scale ? kFullSizes : kDeskSizes);
      cfg.samples = cn->count("--samples") ? samples : (full_scale ? kFullSamples : kDeskSamples);
      cfg.seed = seed;
      cfg.max_depth = cn_depth;
      cfg.workers = workers;
      const auto rows = experiment_cn(cfg, [](const std::string& m) { std::cerr << m << '\n'; });
      emit(out, cn_csv(rows));
      return timeout_dominated(rows) ? kExitTimeouts : 0;
    }

    if (dec->parsed()) {
      const LocalRule rule = model.load();
      DecayConfig cfg;
      cfg.u = parse_cylinder(cyl_u);
      cfg.w = parse_cylinder(cyl_w);
      if (shifts.empty())
        for (Cell s = 1; s <= max_shift; ++s) shifts.push_back(s);
      cfg.shifts = shifts;
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.max_depth = max_depth;
      cfg.workers = workers;
      const auto rows = experiment_correlation_decay(rule, cfg, [](const std::string& m) { std::cerr << m << '\n'; });
      emit(out, decay_csv(rows));
      for (const auto& r : rows)
        if (2 * r.timeouts >= r.samples) return kExitTimeouts;
      return 0;
    }

    if (dua->parsed()) {
      const DualityReport r = duality_check(d_alpha, set_a, k, l, t, trials, seed);
      emit(out, r.csv());
      std::cerr << "intervals " << (r.overlap ? "overlap" : "do not overlap") << ", inequality "
                << (r.inequality ? "consistent" : "violated") << '\n';
      return 0;
    }

    if (exp->parsed()) {
      const LocalRule rule = model.load();
      const nlohmann::json j = envelope ? envelope_to_json(build_envelope(rule)) : rule_to_json(rule);
      emit(out, j.dump(2) + "\n");
      return 0;
    }
  } catch (const ModelFormatError& e) {
    std::cerr << "model file error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
