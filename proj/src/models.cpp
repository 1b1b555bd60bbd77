#include "pca/models.hpp"

#include <algorithm>
#include <sstream>

namespace pca::models {

namespace {

void check_closed(const char* name, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0,1], got " << p;
    throw ParamRange(os.str());
  }
}

void check_open(const char* name, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << name << " must lie in (0,1), got " << p;
    throw ParamRange(os.str());
  }
}

// Binary row giving mass p1 to letter 1.
std::vector<double> bernoulli(double p1) { return {1.0 - p1, p1}; }

std::vector<double> mix(double alpha, Letter a, Letter b) {
  std::vector<double> row(2, 0.0);
  row[a] += alpha;
  row[b] += 1.0 - alpha;
  return row;
}

template <class F>
std::vector<std::vector<double>> tabulate(std::size_t arity, F&& f) {
  std::vector<std::vector<double>> rows(std::size_t{1} << arity);
  std::vector<Letter> word(arity);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < arity; ++j) word[j] = static_cast<Letter>((i >> (arity - 1 - j)) & 1u);
    rows[i] = f(word);
  }
  return rows;
}

}  // namespace

LocalRule noisy_xor(double eps) {
  check_closed("epsilon", eps);
  return LocalRule(2, {0, 1}, tabulate(2, [&](const std::vector<Letter>& w) {
                     const Letter s = static_cast<Letter>((w[0] + w[1]) & 1);
                     return mix(1.0 - eps, s, static_cast<Letter>(1 - s));
                   }));
}

LocalRule percolation(std::vector<int> offsets, double alpha) {
  check_closed("alpha", alpha);
  if (offsets.empty()) throw ParamRange("percolation needs a nonempty neighborhood");
  const std::size_t arity = offsets.size();
  return LocalRule(2, std::move(offsets), tabulate(arity, [&](const std::vector<Letter>& w) {
                     const Letter m = *std::max_element(w.begin(), w.end());
                     return mix(alpha, m, 0);
                   }));
}

LocalRule stavskaya(double alpha) { return percolation({0, 1}, alpha); }

LocalRule majority(double alpha) {
  check_open("alpha", alpha);
  return LocalRule(2, {-1, 0, 1}, tabulate(3, [&](const std::vector<Letter>& w) {
                     const Letter maj = (w[0] + w[1] + w[2]) >= 2 ? 1 : 0;
                     return mix(alpha, maj, static_cast<Letter>(1 - w[1]));
                   }));
}

LocalRule minority(double alpha) {
  check_open("alpha", alpha);
  const LocalRule maj = majority(alpha);
  return LocalRule(2, {-1, 0, 1}, tabulate(3, [&](const std::vector<Letter>& w) {
                     const std::vector<Letter> flipped{static_cast<Letter>(1 - w[0]), static_cast<Letter>(1 - w[1]),
                                                       static_cast<Letter>(1 - w[2])};
                     auto r = maj.row(maj.encode(flipped));
                     return std::vector<double>(r.begin(), r.end());
                   }));
}

LocalRule finae(double alpha) {
  check_open("alpha", alpha);
  return LocalRule(2, {-1, 0, 1}, tabulate(3, [&](const std::vector<Letter>& w) {
                     const bool all_equal = w[0] == w[1] && w[1] == w[2];
                     const Letter out = all_equal ? w[1] : static_cast<Letter>(1 - w[1]);
                     return mix(alpha, out, w[1]);
                   }));
}

LocalRule chma10() {
  // a(00)(1)=1/2, a(01)(1)=0, a(10)(1)=1, a(11)(1)=1/2
  return LocalRule(2, {0, 1}, {bernoulli(0.5), bernoulli(0.0), bernoulli(1.0), bernoulli(0.5)});
}

LocalRule constant(int alphabet_size, std::vector<int> offsets, std::vector<double> law) {
  if (law.size() != static_cast<std::size_t>(alphabet_size)) throw ParamRange("law length must match the alphabet");
  std::size_t rows = 1;
  for (std::size_t i = 0; i < offsets.size(); ++i) rows *= static_cast<std::size_t>(alphabet_size);
  return LocalRule(alphabet_size, std::move(offsets), std::vector<std::vector<double>>(rows, law));
}

}  // namespace pca::models

namespace pca {

const std::vector<ModelSpec>& zoo() {
  static const std::vector<ModelSpec> specs = {
      {"noisy-xor", "epsilon", "x+y mod 2 with cell errors of probability epsilon, V={0,1}", models::noisy_xor},
      {"stavskaya", "alpha", "percolation PCA with V={0,1}", models::stavskaya},
      {"percolation3", "alpha", "percolation PCA with V={-1,0,1}",
       [](double a) { return models::percolation({-1, 0, 1}, a); }},
      {"majority", "alpha", "majority with probability alpha, else flip the center, V={-1,0,1}", models::majority},
      {"minority", "alpha", "majority applied to the complemented neighborhood", models::minority},
      {"finae", "alpha", "flip-if-not-all-equal (ECA 178) with probability alpha, else keep", models::finae},
      {"chma10", "", "a(00)=a(11)=Bernoulli(1/2), a(01)=0, a(10)=1, V={0,1}", [](double) { return models::chma10(); }},
  };
  return specs;
}

const ModelSpec& find_model(const std::string& name) {
  for (const auto& s : zoo())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace pca
