// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "ncpoly.hpp"
#include "shift_op.hpp"

namespace suqcs {

inline Word word_from_string(const std::string& s) {
  Word w;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    bool found = false;
    for (int k = 0; k < kLetterCount; ++k)
      if (tok == letter_name(static_cast<Letter>(k))) {
        w.push_back(static_cast<Letter>(k));
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("unknown letter '" + tok + "'");
  }
  return w;
}

// N x N matrix over NCPoly, row-major.
struct NCMatrix {
  int N = 1;
  std::vector<NCPoly> e;

  NCMatrix() : e(1) {}
  explicit NCMatrix(int n) : N(n), e(static_cast<std::size_t>(n) * n) {}
  static NCMatrix identity(int n) {
    NCMatrix r(n);
    for (int a = 0; a < n; ++a) r(a, a) = NCPoly::one();
    return r;
  }
  static NCMatrix scalar(const NCPoly& x) {
    NCMatrix r(1);
    r(0, 0) = x;
    return r;
  }

  NCPoly& operator()(int r, int c) { return e[static_cast<std::size_t>(r) * N + c]; }
  const NCPoly& operator()(int r, int c) const { return e[static_cast<std::size_t>(r) * N + c]; }

  friend NCMatrix operator*(const NCMatrix& x, const NCMatrix& y) {
    if (x.N != y.N) throw std::invalid_argument("matrix size mismatch");
    NCMatrix r(x.N);
    for (int a = 0; a < x.N; ++a)
      for (int b = 0; b < x.N; ++b)
        for (int c = 0; c < x.N; ++c) r(a, b) += x(a, c) * y(c, b);
    return r;
  }
  friend NCMatrix operator+(NCMatrix x, const NCMatrix& y) {
    for (std::size_t k = 0; k < x.e.size(); ++k) x.e[k] += y.e[k];
    return x;
  }
  friend NCMatrix operator-(NCMatrix x, const NCMatrix& y) {
    for (std::size_t k = 0; k < x.e.size(); ++k) x.e[k] -= y.e[k];
    return x;
  }
  NCMatrix adjoint() const {
    NCMatrix r(N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) r(a, b) = (*this)(b, a).adjoint();
    return r;
  }
  bool is_zero() const {
    for (const auto& x : e)
      if (!x.is_zero()) return false;
    return true;
  }
  friend bool operator==(const NCMatrix&, const NCMatrix&) = default;
};

// The fundamental unitary [[a, -q b*], [b, a*]].
inline NCMatrix fundamental_unitary(double q) {
  NCMatrix u(2);
  u(0, 0) = NCPoly::letter(Letter::a);
  u(0, 1) = NCPoly::letter(Letter::bs) * cplx(-q);
  u(1, 0) = NCPoly::letter(Letter::b);
  u(1, 1) = NCPoly::letter(Letter::as);
  if (q == 0.0) u(0, 1) = NCPoly();
  return u;
}

// Matrix unit times a word: E_{rc} w.
struct Elem {
  std::uint8_t r = 0, c = 0;
  Word w;
  friend bool operator==(const Elem&, const Elem&) = default;
  friend auto operator<=>(const Elem&, const Elem&) = default;
};

using Tuple = std::vector<Elem>;

// Universal n-forms over M_N(free algebra), kept as sums of elementary tuples
// A^0 dA^1 ... dA^n with each A^i a matrix unit times a word.
// Normalization at positions >= 1: d(1) = 0, so E_00 * 1 is rewritten as
// -sum_{a>=1} E_aa * 1 (and dropped outright when N = 1).
class MatForm {
 public:
  using Terms = std::map<Tuple, cplx>;

  MatForm() = default;
  MatForm(int degree, int N) : degree_(degree), N_(N) {
    if (degree < 0 || N < 1 || N > 255) throw std::invalid_argument("MatForm: bad degree or size");
  }

  static MatForm from_matrix(const NCMatrix& x) {
    MatForm f(0, x.N);
    for (int a = 0; a < x.N; ++a)
      for (int b = 0; b < x.N; ++b)
        for (const auto& [w, c] : x(a, b).terms())
          f.add({Elem{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), w}}, c);
    return f;
  }
  static MatForm from_poly(const NCPoly& x) { return from_matrix(NCMatrix::scalar(x)); }

  // a^0 da^1 ... da^n for scalar polynomials (N = 1).
  static MatForm chain(const std::vector<NCPoly>& xs) {
    if (xs.empty()) throw std::invalid_argument("chain: empty");
    MatForm f = from_poly(xs[0]);
    for (std::size_t k = 1; k < xs.size(); ++k) f = f * from_poly(xs[k]).d();
    return f;
  }

  static MatForm chain(const std::vector<NCMatrix>& xs) {
    if (xs.empty()) throw std::invalid_argument("chain: empty");
    MatForm f = from_matrix(xs[0]);
    for (std::size_t k = 1; k < xs.size(); ++k) f = f * from_matrix(xs[k]).d();
    return f;
  }

  int degree() const { return degree_; }
  int N() const { return N_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Adds coef * tuple after normalization.
  void add(Tuple t, cplx coef) {
    if (static_cast<int>(t.size()) != degree_ + 1) throw std::invalid_argument("MatForm::add: tuple length");
    if (coef == cplx(0.0)) return;
    for (std::size_t p = 1; p < t.size(); ++p) {
      const Elem& x = t[p];
      if (x.w.empty() && x.r == x.c && x.r == 0) {
        for (int a = 1; a < N_; ++a) {
          Tuple s = t;
          s[p] = Elem{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(a), {}};
          add(std::move(s), -coef);
        }
        return;
      }
    }
    auto [it, ins] = terms_.try_emplace(std::move(t), coef);
    if (!ins) {
      it->second += coef;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  MatForm& operator+=(const MatForm& o) {
    check_same(o);
    for (const auto& [t, c] : o.terms_) add(t, c);
    return *this;
  }
  MatForm& operator-=(const MatForm& o) {
    check_same(o);
    for (const auto& [t, c] : o.terms_) add(t, -c);
    return *this;
  }
  friend MatForm operator+(MatForm x, const MatForm& y) { return x += y; }
  friend MatForm operator-(MatForm x, const MatForm& y) { return x -= y; }
  friend MatForm operator*(cplx s, const MatForm& x) {
    MatForm r(x.degree_, x.N_);
    if (s == cplx(0.0)) return r;
    for (const auto& [t, c] : x.terms_) r.terms_.emplace(t, s * c);
    return r;
  }
  friend MatForm operator-(const MatForm& x) { return cplx(-1.0) * x; }

  MatForm d() const {
    MatForm r(degree_ + 1, N_);
    for (const auto& [t, c] : terms_)
      for (int a = 0; a < N_; ++a) {
        Tuple s;
        s.reserve(t.size() + 1);
        s.push_back(unit(a));
        s.insert(s.end(), t.begin(), t.end());
        r.add(std::move(s), c);
      }
    return r;
  }

  friend MatForm operator*(const MatForm& x, const MatForm& y) {
    if (x.N_ != y.N_) throw std::invalid_argument("MatForm product: size mismatch");
    MatForm r(x.degree_ + y.degree_, x.N_);
    for (const auto& [tx, cx] : x.terms_)
      for (const auto& [ty, cy] : y.terms_) {
        MatForm left(x.degree_, x.N_);
        rmul(tx, ty[0], cx * cy, left);
        for (const auto& [t, c] : left.terms_) {
          Tuple s = t;
          s.insert(s.end(), ty.begin() + 1, ty.end());
          r.add(std::move(s), c);
        }
      }
    return r;
  }

  // Hochschild boundary, b = 0 on degree 0.
  MatForm b() const {
    if (degree_ == 0) return MatForm(0, N_);
    MatForm r(degree_ - 1, N_);
    const int n = degree_;
    for (const auto& [t, c] : terms_) {
      for (int j = 0; j < n; ++j) {
        auto prod = mul(t[j], t[j + 1]);
        if (!prod) continue;
        Tuple s;
        for (int p = 0; p < j; ++p) s.push_back(t[p]);
        s.push_back(*prod);
        for (int p = j + 2; p <= n; ++p) s.push_back(t[p]);
        r.add(std::move(s), (j % 2 ? -1.0 : 1.0) * c);
      }
      auto prod = mul(t[n], t[0]);
      if (prod) {
        Tuple s{*prod};
        for (int p = 1; p < n; ++p) s.push_back(t[p]);
        r.add(std::move(s), (n % 2 ? -1.0 : 1.0) * c);
      }
    }
    return r;
  }

  // Connes' B: sum_j (-1)^{nj} da^j ... da^n da^0 ... da^{j-1}.
  MatForm B() const {
    MatForm r(degree_ + 1, N_);
    const int n = degree_;
    for (const auto& [t, c] : terms_)
      for (int j = 0; j <= n; ++j)
        for (int a = 0; a < N_; ++a) {
          Tuple s{unit(a)};
          for (int p = j; p <= n; ++p) s.push_back(t[p]);
          for (int p = 0; p < j; ++p) s.push_back(t[p]);
          r.add(std::move(s), ((n * j) % 2 ? -1.0 : 1.0) * c);
        }
    return r;
  }

  // (a^0 da^1 ... da^n)^* = (-1)^n da^{n*} ... da^{1*} a^{0*}
  MatForm star() const {
    MatForm r(degree_, N_);
    const int n = degree_;
    for (const auto& [t, c] : terms_)
      for (int a = 0; a < N_; ++a) {
        Tuple s{unit(a)};
        for (int p = n; p >= 1; --p) s.push_back(adjoint(t[p]));
        MatForm piece(n, N_);
        rmul(s, adjoint(t[0]), ((n % 2) ? -1.0 : 1.0) * std::conj(c), piece);
        r += piece;
      }
    return r;
  }

  MatForm hermitize() const { return cplx(0.5) * (*this + star()); }

  bool is_hermitian() const { return star() == *this; }

  MatForm pruned(double tol) const {
    MatForm r(degree_, N_);
    for (const auto& [t, c] : terms_)
      if (std::abs(c) > tol) r.terms_.emplace(t, c);
    return r;
  }

  double max_abs() const {
    double v = 0.0;
    for (const auto& [t, c] : terms_) v = std::max(v, std::abs(c));
    return v;
  }

  std::size_t max_word_length() const {
    std::size_t L = 0;
    for (const auto& [t, c] : terms_) {
      std::size_t s = 0;
      for (const auto& x : t) s += x.w.size();
      L = std::max(L, s);
    }
    return L;
  }

  // Maps every word through f (linear), keeping tuple structure.
  template <class F>
  MatForm map_entries(F&& f) const {
    MatForm r(degree_, N_);
    for (const auto& [t, c] : terms_) {
      std::vector<std::pair<Tuple, cplx>> acc{{Tuple{}, c}};
      for (const auto& x : t) {
        const NCPoly img = f(x.w);
        std::vector<std::pair<Tuple, cplx>> next;
        for (const auto& [pre, pc] : acc)
          for (const auto& [w, wc] : img.terms()) {
            Tuple s = pre;
            s.push_back(Elem{x.r, x.c, w});
            next.emplace_back(std::move(s), pc * wc);
          }
        acc = std::move(next);
      }
      for (auto& [s, sc] : acc) r.add(std::move(s), sc);
    }
    return r;
  }

  friend bool operator==(const MatForm&, const MatForm&) = default;

  nlohmann::json to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [t, c] : terms_) {
      nlohmann::json tup = nlohmann::json::array();
      for (const auto& x : t) tup.push_back({{"r", x.r}, {"c", x.c}, {"w", to_string(x.w)}});
      terms.push_back({{"coef", {c.real(), c.imag()}}, {"tuple", tup}});
    }
    return {{"degree", degree_}, {"N", N_}, {"terms", terms}};
  }

  static MatForm from_json(const nlohmann::json& j) {
    MatForm f(j.at("degree").get<int>(), j.at("N").get<int>());
    for (const auto& term : j.at("terms")) {
      Tuple t;
      for (const auto& x : term.at("tuple")) {
        const int r = x.at("r").get<int>(), c = x.at("c").get<int>();
        if (r < 0 || c < 0 || r >= f.N_ || c >= f.N_) throw std::invalid_argument("MatForm json: matrix index");
        t.push_back(Elem{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(c), word_from_string(x.at("w"))});
      }
      f.add(std::move(t), cplx(term.at("coef")[0].get<double>(), term.at("coef")[1].get<double>()));
    }
    return f;
  }

  static Elem unit(int a) { return Elem{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(a), {}}; }

  static std::optional<Elem> mul(const Elem& x, const Elem& y) {
    if (x.c != y.r) return std::nullopt;
    return Elem{x.r, y.c, concat(x.w, y.w)};
  }

  static Elem adjoint(const Elem& x) { return Elem{x.c, x.r, suqcs::adjoint(x.w)}; }

 private:
  void check_same(const MatForm& o) const {
    if (o.degree_ != degree_ || o.N_ != N_) throw std::invalid_argument("MatForm: degree or size mismatch");
  }

  // (a^0 da^1 ... da^p) * y = a^0 ... da^{p-1} d(a^p y) - ((a^0 ... da^{p-1}) a^p) dy
  static void rmul(const Tuple& t, const Elem& y, cplx coef, MatForm& out) {
    const std::size_t p = t.size() - 1;
    if (p == 0) {
      if (auto z = mul(t[0], y)) out.add({*z}, coef);
      return;
    }
    if (auto z = mul(t[p], y)) {
      Tuple s(t.begin(), t.end() - 1);
      s.push_back(*z);
      out.add(std::move(s), coef);
    }
    Tuple prefix(t.begin(), t.end() - 1);
    MatForm inner(static_cast<int>(p) - 1, out.N_);
    rmul(prefix, t[p], 1.0, inner);
    for (const auto& [s, c] : inner.terms_) {
      Tuple u = s;
      u.push_back(y);
      out.add(std::move(u), -coef * c);
    }
  }

  int degree_ = 0;
  int N_ = 1;
  Terms terms_;
};

inline MatForm curvature(const MatForm& A) { return A.d() + A * A; }

inline MatForm gauge(const MatForm& A, const NCMatrix& u) {
  if (A.degree() != 1) throw std::invalid_argument("gauge: degree-1 form expected");
  const MatForm U = MatForm::from_matrix(u);
  const MatForm Us = MatForm::from_matrix(u.adjoint());
  return U * A * Us + U * Us.d();
}

// Block operator on H (x) C^N.
struct OpMatrix {
  int N = 1;
  std::vector<ShiftOp> blocks;
  ShiftOp& operator()(int r, int c) { return blocks[static_cast<std::size_t>(r) * N + c]; }
  const ShiftOp& operator()(int r, int c) const { return blocks[static_cast<std::size_t>(r) * N + c]; }

  friend OpMatrix operator*(const OpMatrix& x, const OpMatrix& y) {
    OpMatrix r{x.N, {}};
    for (int a = 0; a < x.N; ++a)
      for (int b = 0; b < x.N; ++b) {
        ShiftOp s = ShiftOp::zero(x(0, 0).trunc());
        for (int c = 0; c < x.N; ++c) s = s + x(a, c) * y(c, b);
        r.blocks.push_back(std::move(s));
      }
    return r;
  }
  friend OpMatrix operator-(const OpMatrix& x, const OpMatrix& y) {
    OpMatrix r{x.N, {}};
    for (std::size_t k = 0; k < x.blocks.size(); ++k) r.blocks.push_back(x.blocks[k] - y.blocks[k]);
    return r;
  }
  OpMatrix adjoint() const {
    OpMatrix r{N, std::vector<ShiftOp>(blocks.size())};
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) r(a, b) = (*this)(b, a).adjoint();
    return r;
  }
  double max_abs_interior() const {
    double v = 0.0;
    for (const auto& b : blocks) v = std::max(v, b.max_abs_interior());
    return v;
  }
};

inline OpMatrix represent_matrix(const NCMatrix& x, const RepContext& R) {
  OpMatrix r{x.N, {}};
  for (const auto& p : x.e) r.blocks.push_back(R.poly(p));
  return r;
}

// pi(A^0)[D, pi(A^1)] ... [D, pi(A^n)] on H (x) C^N.
inline OpMatrix represent(const MatForm& w, const RepContext& R) {
  const int need = w.degree() + static_cast<int>(w.max_word_length());
  if (R.trunc().guard < need) throw std::invalid_argument("represent: guard band smaller than degree + word length");
  OpMatrix r{w.N(), std::vector<ShiftOp>(static_cast<std::size_t>(w.N()) * w.N(), ShiftOp::zero(R.trunc()))};
  for (const auto& [t, c] : w.terms()) {
    bool ok = true;
    for (std::size_t p = 0; p + 1 < t.size(); ++p) ok = ok && t[p].c == t[p + 1].r;
    if (!ok) continue;
    ShiftOp op = R.cached_word(t[0].w);
    for (std::size_t p = 1; p < t.size(); ++p) op = op * R.dcomm(R.cached_word(t[p].w));
    auto& blk = r(t.front().r, t.back().c);
    blk = axpy(1.0, blk, c, op);
  }
  return r;
}

}  // namespace suqcs
