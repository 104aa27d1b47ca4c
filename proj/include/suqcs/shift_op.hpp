// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "basis.hpp"
#include <nlohmann/json.hpp>
#include "ncpoly.hpp"

namespace suqcs {

// Sparse operator on the truncated basis, stored column-compressed.
// Entries of columns in shells m <= m_max - reach are exact; the
// remaining columns may have lost targets that fell outside the truncation.
class ShiftOp {
 public:
  struct Entry {
    std::uint32_t row;
    cplx val;
  };

  ShiftOp() = default;
  explicit ShiftOp(Truncation t) : trunc_(t), col_ptr_(t.dim() + 1, 0) {}

  static ShiftOp zero(Truncation t) { return ShiftOp(t); }

  static ShiftOp diagonal(Truncation t, const std::function<cplx(const BasisIndex&)>& f) {
    ShiftOp r(t);
    const std::size_t n = t.dim();
    r.entries_.reserve(n);
    std::size_t k = 0;
    for (int m = 0; m <= t.m_max; ++m)
      for (int i2 = -m; i2 <= m; i2 += 2)
        for (int j2 = -m; j2 <= m; j2 += 2, ++k) {
          const cplx v = f({m, i2, j2});
          if (v != cplx(0.0)) r.entries_.push_back({static_cast<std::uint32_t>(k), v});
          r.col_ptr_[k + 1] = r.entries_.size();
        }
    return r;
  }

  static ShiftOp identity(Truncation t) {
    return diagonal(t, [](const BasisIndex&) { return cplx(1.0); });
  }

  // Build column by column from a source -> (target, amplitude) rule.
  template <class Rule>
  static ShiftOp from_rule(Truncation t, int reach, Rule&& rule) {
    ShiftOp r(t);
    r.reach_ = reach;
    std::size_t k = 0;
    std::vector<std::pair<BasisIndex, cplx>> out;
    for (int m = 0; m <= t.m_max; ++m)
      for (int i2 = -m; i2 <= m; i2 += 2)
        for (int j2 = -m; j2 <= m; j2 += 2, ++k) {
          out.clear();
          rule(BasisIndex{m, i2, j2}, out);
          std::vector<Entry> col;
          for (auto& [e, v] : out)
            if (v != cplx(0.0) && t.contains(e)) col.push_back({static_cast<std::uint32_t>(t.index(e)), v});
          std::sort(col.begin(), col.end(), [](const Entry& x, const Entry& y) { return x.row < y.row; });
          r.entries_.insert(r.entries_.end(), col.begin(), col.end());
          r.col_ptr_[k + 1] = r.entries_.size();
        }
    return r;
  }

  const Truncation& trunc() const { return trunc_; }
  int reach() const { return reach_; }
  std::size_t dim() const { return trunc_.dim(); }
  std::size_t nnz() const { return entries_.size(); }
  // Largest shell whose columns are exact.
  int interior_shell() const { return trunc_.m_max - reach_; }

  std::span<const Entry> column(std::size_t c) const {
    return {entries_.data() + col_ptr_[c], entries_.data() + col_ptr_[c + 1]};
  }

  cplx entry(std::size_t r, std::size_t c) const {
    for (const auto& e : column(c))
      if (e.row == r) return e.val;
    return 0.0;
  }

  cplx diag(std::size_t c) const { return entry(c, c); }

  ShiftOp adjoint() const {
    ShiftOp r(trunc_);
    r.reach_ = reach_;
    const std::size_t n = dim();
    std::vector<std::size_t> count(n + 1, 0);
    for (const auto& e : entries_) ++count[e.row + 1];
    for (std::size_t k = 0; k < n; ++k) count[k + 1] += count[k];
    r.col_ptr_ = count;
    r.entries_.resize(entries_.size());
    for (std::size_t c = 0; c < n; ++c)
      for (const auto& e : column(c)) r.entries_[count[e.row]++] = {static_cast<std::uint32_t>(c), std::conj(e.val)};
    return r;
  }

  friend ShiftOp compose(const ShiftOp& S, const ShiftOp& T) {
    if (!(S.trunc_ == T.trunc_)) throw std::invalid_argument("compose: truncation mismatch");
    ShiftOp r(T.trunc_);
    r.reach_ = S.reach_ + T.reach_;
    const std::size_t n = T.dim();
    std::vector<cplx> acc(n, 0.0);
    std::vector<char> mark(n, 0);
    std::vector<std::uint32_t> touched;
    r.entries_.reserve(std::max(S.nnz(), T.nnz()));
    for (std::size_t c = 0; c < n; ++c) {
      touched.clear();
      for (const auto& t : T.column(c))
        for (const auto& s : S.column(t.row)) {
          if (!mark[s.row]) {
            mark[s.row] = 1;
            touched.push_back(s.row);
          }
          acc[s.row] += s.val * t.val;
        }
      std::sort(touched.begin(), touched.end());
      for (auto row : touched) {
        if (acc[row] != cplx(0.0)) r.entries_.push_back({row, acc[row]});
        acc[row] = 0.0;
        mark[row] = 0;
      }
      r.col_ptr_[c + 1] = r.entries_.size();
    }
    return r;
  }

  friend ShiftOp operator*(const ShiftOp& S, const ShiftOp& T) { return compose(S, T); }

  friend ShiftOp axpy(cplx a, const ShiftOp& X, cplx b, const ShiftOp& Y) {
    if (!(X.trunc_ == Y.trunc_)) throw std::invalid_argument("sum: truncation mismatch");
    ShiftOp r(X.trunc_);
    r.reach_ = std::max(X.reach_, Y.reach_);
    const std::size_t n = X.dim();
    r.entries_.reserve(X.nnz() + Y.nnz());
    for (std::size_t c = 0; c < n; ++c) {
      auto x = X.column(c);
      auto y = Y.column(c);
      std::size_t p = 0, s = 0;
      while (p < x.size() || s < y.size()) {
        std::uint32_t row;
        cplx v = 0.0;
        if (s >= y.size() || (p < x.size() && x[p].row < y[s].row)) {
          row = x[p].row;
          v = a * x[p++].val;
        } else if (p >= x.size() || y[s].row < x[p].row) {
          row = y[s].row;
          v = b * y[s++].val;
        } else {
          row = x[p].row;
          v = a * x[p++].val + b * y[s++].val;
        }
        if (v != cplx(0.0)) r.entries_.push_back({row, v});
      }
      r.col_ptr_[c + 1] = r.entries_.size();
    }
    return r;
  }

  friend ShiftOp operator+(const ShiftOp& X, const ShiftOp& Y) { return axpy(1.0, X, 1.0, Y); }
  friend ShiftOp operator-(const ShiftOp& X, const ShiftOp& Y) { return axpy(1.0, X, -1.0, Y); }
  friend ShiftOp operator*(cplx s, const ShiftOp& X) {
    ShiftOp r = X;
    for (auto& e : r.entries_) e.val *= s;
    if (s == cplx(0.0)) r = zero_like(X);
    return r;
  }

  static ShiftOp zero_like(const ShiftOp& X) {
    ShiftOp r(X.trunc_);
    r.reach_ = X.reach_;
    return r;
  }

  // Entrywise (f(row) - f(col)) * T: the commutator with a diagonal operator.
  ShiftOp commutator_diag(const std::vector<double>& f) const {
    ShiftOp r(trunc_);
    r.reach_ = reach_;
    const std::size_t n = dim();
    r.entries_.reserve(nnz());
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& e : column(c)) {
        const double w = f[e.row] - f[c];
        if (w != 0.0) r.entries_.push_back({e.row, w * e.val});
      }
      r.col_ptr_[c + 1] = r.entries_.size();
    }
    return r;
  }

  // diag(f) * T
  ShiftOp left_diag(const std::vector<double>& f) const {
    ShiftOp r(trunc_);
    r.reach_ = reach_;
    const std::size_t n = dim();
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& e : column(c))
        if (f[e.row] != 0.0) r.entries_.push_back({e.row, f[e.row] * e.val});
      r.col_ptr_[c + 1] = r.entries_.size();
    }
    return r;
  }

  // Largest |entry| over columns in shells <= max_shell.
  double max_abs(int max_shell) const {
    double v = 0.0;
    const std::size_t end = shell_offset(std::min(max_shell, trunc_.m_max) + 1);
    for (std::size_t c = 0; c < end; ++c)
      for (const auto& e : column(c)) v = std::max(v, std::abs(e.val));
    return v;
  }

  double max_abs_interior() const { return max_abs(interior_shell()); }

  // Entrywise comparison on the common interior.
  friend double interior_distance(const ShiftOp& X, const ShiftOp& Y) {
    const ShiftOp d = X - Y;
    return d.max_abs(std::min(X.interior_shell(), Y.interior_shell()));
  }

  void set_reach(int r) { reach_ = r; }

  // [(source, target, re, im), ...] with labels as [m, i2, j2]
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t c = 0; c < dim(); ++c) {
      const BasisIndex s = trunc_.label(c);
      for (const auto& e : column(c)) {
        const BasisIndex t = trunc_.label(e.row);
        arr.push_back({{s.m, s.i2, s.j2}, {t.m, t.i2, t.j2}, e.val.real(), e.val.imag()});
      }
    }
    return {{"m_max", trunc_.m_max}, {"guard", trunc_.guard}, {"reach", reach_}, {"entries", arr}};
  }

  static ShiftOp from_json(const nlohmann::json& j) {
    Truncation t(j.at("m_max").get<int>(), j.at("guard").get<int>());
    std::vector<std::vector<Entry>> cols(t.dim());
    for (const auto& x : j.at("entries")) {
      const BasisIndex s{x[0][0], x[0][1], x[0][2]};
      const BasisIndex d{x[1][0], x[1][1], x[1][2]};
      if (!t.contains(s) || !t.contains(d)) throw std::invalid_argument("ShiftOp json: label outside truncation");
      cols[t.index(s)].push_back({static_cast<std::uint32_t>(t.index(d)), cplx(x[2].get<double>(), x[3].get<double>())});
    }
    ShiftOp r(t);
    r.reach_ = j.at("reach").get<int>();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::sort(cols[c].begin(), cols[c].end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
      r.entries_.insert(r.entries_.end(), cols[c].begin(), cols[c].end());
      r.col_ptr_[c + 1] = r.entries_.size();
    }
    return r;
  }

 private:
  Truncation trunc_{};
  int reach_ = 0;
  std::vector<std::size_t> col_ptr_;
  std::vector<Entry> entries_;
};

// Eigenvalue of the Dirac operator on a basis label.
inline double dirac_value(const BasisIndex& e) { return e.i2 == e.m ? e.m : -e.m; }
inline double sign_value(const BasisIndex& e) { return e.i2 == e.m ? 1.0 : -1.0; }

struct DiracData {
  ShiftOp D, absD, F, P, absD_inv;
};

inline DiracData dirac(const Truncation& t) {
  DiracData d;
  d.D = ShiftOp::diagonal(t, [](const BasisIndex& e) { return cplx(dirac_value(e)); });
  d.absD = ShiftOp::diagonal(t, [](const BasisIndex& e) { return cplx(e.m); });
  d.F = ShiftOp::diagonal(t, [](const BasisIndex& e) { return cplx(sign_value(e)); });
  d.P = ShiftOp::diagonal(t, [](const BasisIndex& e) { return cplx(e.i2 == e.m ? 1.0 : 0.0); });
  d.absD_inv = ShiftOp::diagonal(t, [](const BasisIndex& e) { return cplx(e.m == 0 ? 0.0 : 1.0 / e.m); });
  return d;
}

// Builds a single letter as a weighted shift.
inline ShiftOp build_generator(Letter g, double q, const Truncation& t) {
  detail::check_q(q);
  auto ladder = [&](Ladder kind, int dm, int di) {
    return ShiftOp::from_rule(t, 1, [=](const BasisIndex& e, auto& out) {
      const BasisIndex tgt{e.m + dm, e.i2 + di, e.j2 - 1};
      if (!tgt.valid()) return;
      out.emplace_back(tgt, cplx(ladder_coeff2(kind, e.m, e.i2, e.j2, q)));
    });
  };
  switch (g) {
    case Letter::ap: return ladder(Ladder::a_plus, +1, -1);
    case Letter::am: return ladder(Ladder::a_minus, -1, -1);
    case Letter::bp: return ladder(Ladder::b_plus, +1, +1);
    case Letter::bm: return ladder(Ladder::b_minus, -1, +1);
    case Letter::a: return build_generator(Letter::ap, q, t) + build_generator(Letter::am, q, t);
    case Letter::b: return build_generator(Letter::bp, q, t) + build_generator(Letter::bm, q, t);
    default: return build_generator(adjoint(g), q, t).adjoint();
  }
}

// Derived operators of T with respect to the Dirac operator.
struct Derivations {
  ShiftOp delta;  // [|D|, T]
  ShiftOp nabla;  // [D^2, T]
  ShiftOp dcomm;  // [D, T]
};

// Cached generator images and diagonal data for one (q, truncation).
class RepContext {
 public:
  RepContext(double q, Truncation t) : q_(q), trunc_(t) {
    detail::check_q(q);
    const std::size_t n = t.dim();
    D_.resize(n);
    absD_.resize(n);
    D2_.resize(n);
    std::size_t k = 0;
    for (int m = 0; m <= t.m_max; ++m)
      for (int i2 = -m; i2 <= m; i2 += 2)
        for (int j2 = -m; j2 <= m; j2 += 2, ++k) {
          D_[k] = dirac_value({m, i2, j2});
          absD_[k] = m;
          D2_[k] = static_cast<double>(m) * m;
        }
  }

  double q() const { return q_; }
  const Truncation& trunc() const { return trunc_; }
  const std::vector<double>& D() const { return D_; }
  const std::vector<double>& absD() const { return absD_; }
  const std::vector<double>& D2() const { return D2_; }

  const ShiftOp& letter(Letter l) const {
    std::lock_guard<std::mutex> lock(*mu_);
    auto& slot = letters_[static_cast<int>(l)];
    if (!slot) slot = std::make_shared<ShiftOp>(build_generator(l, q_, trunc_));
    return *slot;
  }

  ShiftOp word(const Word& w) const {
    if (w.empty()) return ShiftOp::identity(trunc_);
    ShiftOp r = letter(w.back());
    for (std::size_t k = w.size() - 1; k-- > 0;) r = compose(letter(w[k]), r);
    return r;
  }

  const ShiftOp& cached_word(const Word& w) const {
    {
      std::lock_guard<std::mutex> lock(*mu_);
      auto it = words_.find(w);
      if (it != words_.end()) return *it->second;
    }
    auto op = std::make_shared<ShiftOp>(word(w));
    std::lock_guard<std::mutex> lock(*mu_);
    auto [it, ins] = words_.emplace(w, op);
    return *it->second;
  }

  ShiftOp poly(const NCPoly& x) const {
    ShiftOp r = ShiftOp::zero(trunc_);
    for (const auto& [w, c] : x.terms()) r = axpy(1.0, r, c, cached_word(w));
    if (x.is_zero()) r.set_reach(0);
    return r;
  }

  Derivations derivations(const ShiftOp& T) const {
    return {T.commutator_diag(absD_), T.commutator_diag(D2_), T.commutator_diag(D_)};
  }
  ShiftOp delta(const ShiftOp& T) const { return T.commutator_diag(absD_); }
  ShiftOp nabla(const ShiftOp& T) const { return T.commutator_diag(D2_); }
  ShiftOp dcomm(const ShiftOp& T) const { return T.commutator_diag(D_); }

  void clear_word_cache() const {
    std::lock_guard<std::mutex> lock(*mu_);
    words_.clear();
  }

 private:
  double q_;
  Truncation trunc_;
  std::vector<double> D_, absD_, D2_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  mutable std::array<std::shared_ptr<ShiftOp>, kLetterCount> letters_{};
  mutable std::map<Word, std::shared_ptr<ShiftOp>> words_;
};

struct RelationReport {
  std::array<double, 5> residual{};  // a*a+b*b-1, aa*+q^2bb*-1, ab-qba, ab*-qb*a, bb*-b*b
  int interior_shell = 0;
  double max() const { return *std::max_element(residual.begin(), residual.end()); }
  static constexpr std::array<const char*, 5> names{"a*a + b*b - 1", "aa* + q^2 bb* - 1", "ab - q ba",
                                                    "ab* - q b*a", "bb* - b*b"};
};

inline RelationReport relation_residual(double q, const Truncation& t) {
  if (t.guard < 2) throw std::invalid_argument("relation_residual needs guard >= 2");
  RepContext R(q, t);
  auto P = [&](std::initializer_list<Letter> w) { return R.word(Word(w)); };
  const ShiftOp I = ShiftOp::identity(t);
  using L = Letter;
  std::array<ShiftOp, 5> res{
      P({L::as, L::a}) + P({L::bs, L::b}) - I,
      axpy(1.0, P({L::a, L::as}), q * q, P({L::b, L::bs})) - I,
      axpy(1.0, P({L::a, L::b}), -q, P({L::b, L::a})),
      axpy(1.0, P({L::a, L::bs}), -q, P({L::bs, L::a})),
      P({L::b, L::bs}) - P({L::bs, L::b}),
  };
  RelationReport rep;
  rep.interior_shell = t.m_max - 2;
  for (int k = 0; k < 5; ++k) rep.residual[k] = res[k].max_abs(rep.interior_shell);
  return rep;
}

// gamma-grading of ladder letters: +1 for a+, b+, and their adjoints' opposites.
inline int gamma_degree(Letter l) {
  switch (l) {
    case Letter::ap: case Letter::bp: return 1;
    case Letter::am: case Letter::bm: return -1;
    case Letter::aps: case Letter::bps: return -1;
    case Letter::ams: case Letter::bms: return 1;
    default: throw std::invalid_argument("gamma degree is defined on the ladder alphabet only");
  }
}

inline int gamma_degree(const Word& w) {
  int d = 0;
  for (Letter l : w) d += gamma_degree(l);
  return d;
}

}  // namespace suqcs
