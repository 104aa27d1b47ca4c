// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "forms.hpp"

namespace suqcs {

// Random test data with small integer (Gaussian-integer) coefficients, so identities are exact.
class FormSampler {
 public:
  explicit FormSampler(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  cplx int_coeff() {
    int re = 0, im = 0;
    while (re == 0 && im == 0) {
      re = uniform(-3, 3);
      im = uniform(-2, 2);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  Word word(int max_len, bool generators_only = true) {
    const int len = uniform(0, max_len);
    Word w;
    for (int k = 0; k < len; ++k)
      w.push_back(static_cast<Letter>(uniform(0, generators_only ? 3 : kLetterCount - 1)));
    return w;
  }

  // Words in a, a* only (the part seen by the symbol map).
  Word alpha_word(int max_len) {
    const int len = uniform(0, max_len);
    Word w;
    for (int k = 0; k < len; ++k) w.push_back(uniform(0, 1) ? Letter::a : Letter::as);
    return w;
  }

  NCPoly poly(int terms, int max_len, bool generators_only = true) {
    NCPoly p;
    for (int k = 0; k < terms; ++k) p.add_term(word(max_len, generators_only), int_coeff());
    return p;
  }

  NCMatrix matrix(int N, int terms, int max_len) {
    NCMatrix m(N);
    for (int k = 0; k < terms; ++k) {
      const int a = uniform(0, N - 1), b = uniform(0, N - 1);
      m(a, b) = m(a, b) + NCPoly(word(max_len), int_coeff());
    }
    return m;
  }

  // Sum of `chains` elementary forms a^0 da^1 ... da^n.
  MatForm form(int degree, int N, int chains = 2, int max_len = 2) {
    MatForm f(degree, N);
    for (int c = 0; c < chains; ++c) {
      std::vector<NCMatrix> xs;
      for (int k = 0; k <= degree; ++k) xs.push_back(matrix(N, 1, max_len));
      f += MatForm::chain(xs);
    }
    return f;
  }

  // Small hermitian 1-form; `alpha_heavy` biases words towards a, a*.
  MatForm hermitian_one_form(int N, int chains, int max_len, double scale, bool alpha_heavy = true) {
    MatForm f(1, N);
    for (int c = 0; c < chains; ++c) {
      NCMatrix x(N), y(N);
      const int a = uniform(0, N - 1), b = uniform(0, N - 1), d = uniform(0, N - 1);
      x(a, b) = NCPoly(alpha_heavy && uniform(0, 3) ? alpha_word(max_len) : word(max_len),
                       cplx(real(-scale, scale), real(-scale, scale)));
      Word w = alpha_heavy && uniform(0, 3) ? alpha_word(max_len) : word(max_len);
      if (w.empty()) w.push_back(Letter::a);
      y(b, d) = NCPoly(w);
      f += MatForm::chain(std::vector<NCMatrix>{x, y});
    }
    return f.hermitize();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace suqcs
