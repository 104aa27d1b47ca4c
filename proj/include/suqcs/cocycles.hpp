// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forms.hpp"
#include "fourier.hpp"
#include <nlohmann/json.hpp>
#include "q0_canonical.hpp"
#include "shift_op.hpp"
#include "symbols.hpp"
#include "zeta.hpp"

namespace suqcs {

inline constexpr double kPi = std::numbers::pi;
inline const cplx kI{0.0, 1.0};

enum class Phi1Route { symbolic, cm };
enum class Phi0Route { explicit_q0, regularized };
// wodzicki: Res_{z=0} Trace(P|D|^{-z}) (= c_{-y-1}); zeta_half: tau_0 = c_{-y-1} / 2.
enum class ResidueNorm { wodzicki, zeta_half };

inline const char* to_string(Phi1Route r) { return r == Phi1Route::symbolic ? "symbolic" : "cm"; }
inline const char* to_string(Phi0Route r) { return r == Phi0Route::explicit_q0 ? "explicit" : "regularized"; }
inline const char* to_string(ResidueNorm r) { return r == ResidueNorm::wodzicki ? "wodzicki" : "zeta_half"; }

struct EngineConfig {
  double q = 0.0;
  Truncation trunc{60, 16};
  Phi0Route phi0 = Phi0Route::explicit_q0;  // ignored for q > 0 (regularized only)
  ResidueNorm norm = ResidueNorm::wodzicki;
  bool literal_rho_bound = false;           // sum_{j=1}^{|k-1|} instead of sum_{j=1}^{|k|-1}
  bool f_negative_symmetric = true;         // F_k for k < 0 read as F_{|k|}
};

// Cyclic trace of a product of matrix units E_{r0 c0} ... E_{rn cn}.
inline bool unit_trace(const Tuple& t) {
  for (std::size_t p = 0; p + 1 < t.size(); ++p)
    if (t[p].c != t[p + 1].r) return false;
  return t.back().c == t.front().r;
}

// Trace over C^N of a degree-0 form, as a polynomial.
inline NCPoly trace_poly(const MatForm& x) {
  if (x.degree() != 0) throw std::invalid_argument("trace_poly: degree-0 form expected");
  NCPoly r;
  for (const auto& [t, c] : x.terms())
    if (t[0].r == t[0].c) r.add_term(t[0].w, c);
  return r;
}

inline MatForm matrix_units_form(const NCMatrix& x) { return MatForm::from_matrix(x); }

struct ActionBreakdown {
  cplx phi3_part, phi1_part, total;
  int level = 1;
  std::string phi3_route, phi1_route;
  std::optional<cplx> split_total;  // S(A_1) - 2 pi k phi_1(A_2)

  nlohmann::json to_json() const {
    nlohmann::json j{{"phi3_part", {phi3_part.real(), phi3_part.imag()}},
                     {"phi1_part", {phi1_part.real(), phi1_part.imag()}},
                     {"total", {total.real(), total.imag()}},
                     {"level", level},
                     {"phi3_route", phi3_route},
                     {"phi1_route", phi1_route}};
    if (split_total) j["split_total"] = {split_total->real(), split_total->imag()};
    return j;
  }
};

inline ActionBreakdown make_breakdown(cplx p3, cplx p1, int k, std::string r3, std::string r1) {
  ActionBreakdown b;
  b.phi3_part = p3;
  b.phi1_part = p1;
  b.level = k;
  b.total = 6.0 * kPi * k * p3 - 2.0 * kPi * k * p1;
  b.phi3_route = std::move(r3);
  b.phi1_route = std::move(r1);
  return b;
}

struct Phi1Parts {
  cplx leading;   // chi (q > 0) or tau_1 (q = 0); for cm the |D|^{-1} term
  cplx bphi0;     // for cm: the nabla term
  cplx Bphi2;     // for cm: the nabla^2 term
  cplx total() const { return leading + bphi0 + Bphi2; }
};

// Evaluates every cochain on matrix-valued universal forms for one (q, truncation).
class CochainEngine {
 public:
  explicit CochainEngine(EngineConfig cfg) : cfg_(cfg) { detail::check_q(cfg.q); }

  const EngineConfig& config() const { return cfg_; }
  double q() const { return cfg_.q; }

  const RepContext& rep() const {
    if (!rep_) rep_ = std::make_unique<RepContext>(cfg_.q, cfg_.trunc);
    return *rep_;
  }

  // ---- symbol-level cochains ------------------------------------------------

  // 24 phi_2(a0 da1 da2), where phi_2 = -(1/24)(1/2 pi i) \int f0 f1' f2''
  static double phi2_words_scaled(const Word& w0, const Word& w1, const Word& w2) {
    auto k0 = sigma_word(w0), k1 = sigma_word(w1), k2 = sigma_word(w2);
    if (!k0 || !k1 || !k2 || *k0 + *k1 + *k2 != 0) return 0.0;
    return static_cast<double>(*k1) * (*k2) * (*k2);
  }
  static cplx phi2_words(const Word& w0, const Word& w1, const Word& w2) {
    return phi2_words_scaled(w0, w1, w2) / 24.0;
  }

  // The sum is accumulated before the single division, so integer data give exact results.
  cplx phi2(const MatForm& w) const {
    if (w.degree() != 2) throw std::invalid_argument("phi2: degree-2 form expected");
    cplx s = 0.0;
    for (const auto& [t, c] : w.terms())
      if (unit_trace(t)) s += c * phi2_words_scaled(t[0].w, t[1].w, t[2].w);
    return s / 24.0;
  }

  // Same integral on explicit symbols (used as an oracle).
  static cplx phi2_symbols(const FourierPoly& f0, const FourierPoly& f1, const FourierPoly& f2) {
    return -(1.0 / 24.0) * (f0 * f1.derivative() * f2.derivative(2)).contour_integral();
  }

  // phi_3 = b phi_2
  cplx phi3(const MatForm& w) const {
    if (w.degree() != 3) throw std::invalid_argument("phi3: degree-3 form expected");
    return phi2(w.b());
  }

  // -(1/12)(1/2 pi i) \int f0 f1' f2' f3', the closed form of b phi_2
  static cplx phi3_words_closed(const Word& w0, const Word& w1, const Word& w2, const Word& w3) {
    auto k0 = sigma_word(w0), k1 = sigma_word(w1), k2 = sigma_word(w2), k3 = sigma_word(w3);
    if (!k0 || !k1 || !k2 || !k3 || *k0 + *k1 + *k2 + *k3 != 0) return 0.0;
    return static_cast<double>(*k1) * (*k2) * (*k3) / 12.0;
  }

  cplx phi3_closed(const MatForm& w) const {
    cplx s = 0.0;
    for (const auto& [t, c] : w.terms())
      if (unit_trace(t)) s += c * (12.0 * phi3_words_closed(t[0].w, t[1].w, t[2].w, t[3].w));
    return s / 12.0;
  }

  // ---- residue-backed quantities ---------------------------------------------

  double norm_factor() const { return cfg_.norm == ResidueNorm::wodzicki ? 1.0 : 0.5; }

  static PoleModel cm_model(int degree) {
    PoleModel m;
    m.max_power = degree;
    m.min_power = 0;
    return m;
  }

  // Residue of T |D|^y in the configured normalization.
  cplx residue(const ShiftOp& T, int y, int degree) const {
    const PoleFit f = fit_poles(shell_traces(T), cm_model(degree));
    return norm_factor() * wres(f, y);
  }

  // (1/12) Res(pi(a0)[D,a1][D,a2][D,a3] |D|^{-3})
  cplx phi3_cm_words(const Word& w0, const Word& w1, const Word& w2, const Word& w3) const {
    const auto key = std::vector<Word>{w0, w1, w2, w3};
    if (auto it = cm3_.find(key); it != cm3_.end()) return it->second;
    const RepContext& R = rep();
    const ShiftOp op = R.cached_word(w0) * R.dcomm(R.cached_word(w1)) * R.dcomm(R.cached_word(w2)) *
                       R.dcomm(R.cached_word(w3));
    const cplx v = residue(op, -3, 2) / 12.0;
    cm3_.emplace(key, v);
    return v;
  }

  cplx phi3_cm(const MatForm& w) const {
    if (w.degree() != 3) throw std::invalid_argument("phi3_cm: degree-3 form expected");
    check_guard(w);
    cplx s = 0.0;
    for (const auto& [t, c] : w.terms())
      if (unit_trace(t)) s += c * phi3_cm_words(t[0].w, t[1].w, t[2].w, t[3].w);
    return s;
  }

  // Res(a0[D,a1]|D|^{-1}) - 1/4 Res(a0 nabla([D,a1])|D|^{-3}) + 1/8 Res(a0 nabla^2([D,a1])|D|^{-5})
  Phi1Parts phi1_cm_words(const Word& w0, const Word& w1) const {
    const auto key = std::make_pair(w0, w1);
    if (auto it = cm1_.find(key); it != cm1_.end()) return it->second;
    const RepContext& R = rep();
    const ShiftOp a0 = R.cached_word(w0);
    const ShiftOp da = R.dcomm(R.cached_word(w1));
    const ShiftOp n1 = R.nabla(da);
    const ShiftOp n2 = R.nabla(n1);
    Phi1Parts p;
    p.leading = residue(a0 * da, -1, 2);
    p.bphi0 = -0.25 * residue(a0 * n1, -3, 3);
    p.Bphi2 = 0.125 * residue(a0 * n2, -5, 4);
    cm1_.emplace(key, p);
    return p;
  }

  // Regularized Trace(pi(x)|D|^{-s}) at s = 0.
  cplx phi0_regularized(const NCPoly& x) const {
    cplx s = 0.0;
    for (const auto& [w, c] : x.terms()) {
      auto it = phi0w_.find(w);
      if (it == phi0w_.end()) {
        const ShiftOp& op = rep().cached_word(w);
        const ShellSeries ser = shell_traces(op);
        PoleModel m;
        m.max_power = 2;
        m.min_power = 0;
        const PoleFit f = fit_poles(ser, m);
        it = phi0w_.emplace(w, phi0_reg(ser, f).value).first;
      }
      s += c * it->second;
    }
    return s;
  }

  Phi0Route phi0_route() const { return cfg_.q == 0.0 ? cfg_.phi0 : Phi0Route::regularized; }

  cplx phi0(const NCPoly& x) const {
    if (phi0_route() == Phi0Route::explicit_q0) return q0_phi0_explicit(x);
    return phi0_regularized(x);
  }

  cplx bphi0(const MatForm& w) const { return phi0(trace_poly(w.b())); }
  cplx Bphi2(const MatForm& w) const { return phi2(w.B()); }

  // q = 0 tau_1 on matrix 1-forms
  cplx tau1(const MatForm& w) const {
    cplx s = 0.0;
    for (const auto& [t, c] : w.terms())
      if (unit_trace(t)) s += c * q0_tau1(NCPoly(t[0].w), NCPoly(t[1].w));
    return s;
  }

  cplx tau0_word(const Word& w) const {
    auto it = tau0w_.find(w);
    if (it == tau0w_.end()) it = tau0w_.emplace(w, tau0_pi_minus(NCPoly(w), cfg_.q).value).first;
    return it->second;
  }

  // chi(a0 da1) = tau(a0 del(a1)) + (1/2 pi i) \int sigma(a0) (1/2) sigma(a1)''
  cplx chi_words(const Word& w0, const Word& w1) const {
    if (!word_is_generator(w0) || !word_is_generator(w1))
      throw std::invalid_argument("chi: generator alphabet expected");
    cplx v = 0.0;
    const int dd = del_degree(w1);
    const Word w = concat(w0, w1);
    if (dd != 0 && del_degree(w) == 0) v += static_cast<double>(dd) * tau0_word(w);
    auto k0 = sigma_word(w0), k1 = sigma_word(w1);
    if (k0 && k1 && *k0 + *k1 == 0) v += kI * (static_cast<double>(*k1) * (*k1) / 2.0);
    return v;
  }

  cplx chi(const MatForm& w) const {
    if (w.degree() != 1) throw std::invalid_argument("chi: degree-1 form expected");
    cplx s = 0.0;
    for (const auto& [t, c] : w.terms())
      if (unit_trace(t)) s += c * chi_words(t[0].w, t[1].w);
    return s;
  }

  Phi1Parts phi1_parts(const MatForm& w, Phi1Route route) const {
    if (w.degree() != 1) throw std::invalid_argument("phi1: degree-1 form expected");
    Phi1Parts p;
    if (route == Phi1Route::cm) {
      check_guard(w);
      for (const auto& [t, c] : w.terms()) {
        if (!unit_trace(t)) continue;
        const Phi1Parts x = phi1_cm_words(t[0].w, t[1].w);
        p.leading += c * x.leading;
        p.bphi0 += c * x.bphi0;
        p.Bphi2 += c * x.Bphi2;
      }
      return p;
    }
    p.leading = cfg_.q == 0.0 ? tau1(w) : chi(w);
    p.bphi0 = bphi0(w);
    p.Bphi2 = Bphi2(w);
    return p;
  }

  cplx phi1(const MatForm& w, Phi1Route route) const { return phi1_parts(w, route).total(); }

  // ---- action ------------------------------------------------------------------

  // Gauge transforms are hermitian only modulo the algebra relations; pass check_hermitian = false for them.
  ActionBreakdown action(const MatForm& A, int level, Phi1Route route, bool with_split = true,
                         bool check_hermitian = true) const {
    if (A.degree() != 1) throw std::invalid_argument("action: degree-1 form expected");
    const double herm = check_hermitian ? (A - A.star()).max_abs() : 0.0;
    if (herm > 1e-12 * std::max(1.0, A.max_abs())) throw std::invalid_argument("action: form is not hermitian");
    auto cs3 = [&](const MatForm& X) { return phi3(X * X.d() + cplx(2.0 / 3.0) * (X * X * X)); };
    ActionBreakdown b = make_breakdown(cs3(A), phi1(A, route), level, "b-phi2", to_string(route));
    if (with_split) {
      const Decomposition dec = decompose(A);
      const cplx s1 = 6.0 * kPi * level * cs3(dec.A1) - 2.0 * kPi * level * phi1(dec.A1, route);
      b.split_total = s1 - 2.0 * kPi * level * phi1(dec.A2, route);
    }
    return b;
  }

  // ---- special constants -------------------------------------------------------

  struct HValue {
    cplx regularized;
    std::optional<cplx> explicit_q0;
  };

  HValue H(int k) const {
    HValue h;
    if (k == 0) {
      h.regularized = 0.0;
      if (cfg_.q == 0.0) h.explicit_q0 = 0.0;
      return h;
    }
    const NCPoly a = NCPoly(alpha_power(k)), as = NCPoly(alpha_power(-k));
    const NCPoly c = commutator(a, as);
    h.regularized = phi0_regularized(c);
    if (cfg_.q == 0.0) h.explicit_q0 = q0_phi0_explicit(c);
    return h;
  }

  // tau_0(r_-(a^k a*^k)) with a^k = a*^{|k|} for k < 0
  cplx tau0_alpha_pair(int k) const {
    return tau0_word(concat(alpha_power(k), alpha_power(-k)));
  }

  void check_guard(const MatForm& w) const {
    const int need = w.degree() + static_cast<int>(w.max_word_length());
    if (cfg_.trunc.guard < need)
      throw std::invalid_argument("truncation guard " + std::to_string(cfg_.trunc.guard) +
                                  " smaller than required " + std::to_string(need));
    if (cfg_.trunc.m_max - need < 24) throw std::invalid_argument("truncation too small for residue fits");
  }

 private:
  EngineConfig cfg_;
  mutable std::unique_ptr<RepContext> rep_;
  mutable std::map<std::vector<Word>, cplx> cm3_;
  mutable std::map<std::pair<Word, Word>, Phi1Parts> cm1_;
  mutable std::map<Word, cplx> phi0w_;
  mutable std::map<Word, cplx> tau0w_;
};

// ---- closed-form action --------------------------------------------------------

struct ClosedFormOptions {
  double q = 0.0;
  int level = 1;
  bool literal_rho_bound = false;
  bool f_negative_symmetric = true;  // F_k for k < 0 as F_{|k|}; otherwise the empty-product value 0
  Phi0Route h_route = Phi0Route::explicit_q0;
  std::optional<std::map<int, cplx>> H_values;  // H_k overrides, k >= 1
  std::optional<std::map<int, cplx>> F_values;  // F_k overrides (signed k)
  // literal: -2 sum sgn(k) Im_kk H'_{|k|} with H' in the literal form (q = 0: rho summed from j = 1);
  // direct: -sum sgn(k) Im_kk H_{|k|}, H_k = phi_0([a^k, a*^k]), which is what b phi_0 evaluates to
  bool literal_bphi0 = true;
};

// -(1/12) sum k2 k3 k4 Im_{k1k2} Re_{k3k4} delta(k2-k1+k4-k3)
//  + (1/18) sum k2 k4 k6 Im Im Im delta(k2-k1+k4-k3+k6-k5)
inline cplx closed_form_phi3(const ActionCoefficients& c) {
  cplx quad = 0.0;
  for (const auto& [a, im] : c.im)
    for (const auto& [b, re] : c.re)
      if (a.second - a.first + b.second - b.first == 0)
        quad += static_cast<double>(a.second) * b.first * b.second * im * re;
  std::map<int, std::vector<std::pair<int, cplx>>> by_diff;  // k6 - k5 -> (k6, Im)
  for (const auto& [a, im] : c.im) by_diff[a.second - a.first].emplace_back(a.second, im);
  cplx cub = 0.0;
  for (const auto& [a, ima] : c.im)
    for (const auto& [b, imb] : c.im) {
      const int need = -(a.second - a.first + b.second - b.first);
      auto it = by_diff.find(need);
      if (it == by_diff.end()) continue;
      for (const auto& [k6, imc] : it->second)
        cub += static_cast<double>(a.second) * b.second * k6 * ima * imb * imc;
    }
  return -quad / 12.0 + cub / 18.0;
}

inline double sgn(int k) { return (k > 0) - (k < 0); }

struct ClosedFormPhi1 {
  cplx f_term, re_term, im_sq_term, h_term, cubic_term;
  cplx total() const { return f_term + re_term + im_sq_term + h_term + cubic_term; }
};

inline ClosedFormPhi1 closed_form_phi1(const ActionCoefficients& c, const ClosedFormOptions& o,
                                       const CochainEngine* engine = nullptr) {
  ClosedFormPhi1 r;
  for (const auto& [kl, im] : c.im) {
    if (kl.first != kl.second) continue;
    const int k = kl.first;
    r.cubic_term += -static_cast<double>(k) * k * k * im / 12.0;
  }
  if (o.q == 0.0) {
    for (const auto& [kl, im] : c.im) {
      if (kl.first != kl.second || kl.first == 0) continue;
      const int k = kl.first;
      if (!o.literal_bphi0) {
        cplx h = 0.0;
        if (o.h_route == Phi0Route::explicit_q0) {
          for (int j = 0; j < std::abs(k); ++j) h += q0_rho(j);
        } else {
          if (!engine) throw std::invalid_argument("closed_form_phi1: regularized H_k needs an engine");
          h = engine->H(std::abs(k)).regularized;
        }
        r.h_term += -sgn(k) * im * h;
        continue;
      }
      const int upper = o.literal_rho_bound ? std::abs(k - 1) : std::abs(k) - 1;
      double rs = 0.0;
      for (int j = 1; j <= upper; ++j) rs += q0_rho(j);
      r.h_term += -2.0 * sgn(k) * im * rs;
    }
    return r;
  }
  auto Fk = [&](int k) -> cplx {
    if (o.F_values) {
      auto it = o.F_values->find(k);
      if (it != o.F_values->end()) return it->second;
    }
    if (k < 0 && !o.f_negative_symmetric) return 0.0;
    return F_k(std::abs(k), o.q).value;
  };
  auto Hk = [&](int k) -> cplx {
    if (o.H_values) {
      auto it = o.H_values->find(k);
      if (it != o.H_values->end()) return it->second;
    }
    if (!engine) throw std::invalid_argument("closed_form_phi1: H_k needs an engine or explicit values");
    return engine->H(k).regularized;
  };
  for (const auto& [kl, im] : c.im) {
    if (kl.first != kl.second) continue;
    const int k = kl.first;
    r.f_term += -2.0 * static_cast<double>(k) * im * Fk(k);
    r.im_sq_term += sgn(k) * static_cast<double>(k) * k * im;
    if (k != 0) r.h_term += (o.literal_bphi0 ? -2.0 : -1.0) * sgn(k) * im * Hk(std::abs(k));
  }
  for (const auto& [kl, re] : c.re) {
    if (kl.first != kl.second) continue;
    const int k = kl.first;
    r.re_term += cplx(1.0, 1.0) * (static_cast<double>(k) * k) * re;
  }
  return r;
}

inline ActionBreakdown action_closed_form(const ActionCoefficients& c, const ClosedFormOptions& o,
                                          const CochainEngine* engine = nullptr) {
  return make_breakdown(closed_form_phi3(c), closed_form_phi1(c, o, engine).total(), o.level, "closed-form",
                        o.q == 0.0 ? "closed-form-q0" : "closed-form");
}

// ---- Fredholm index ------------------------------------------------------------

struct IndexResult {
  int numeric_index = 0;
  std::pair<int, int> kernel_dims{0, 0};
  double threshold = 0.0;
  double smallest_kept = 0.0;      // smallest singular value above threshold
  double largest_dropped = 0.0;    // largest singular value below threshold
  bool indeterminate = false;
  int m_max = 0, guard = 0;
  std::optional<cplx> cocycle_value;
  std::string cocycle_route;

  nlohmann::json to_json() const {
    nlohmann::json j{{"numeric_index", numeric_index},
                     {"kernel_dims", {kernel_dims.first, kernel_dims.second}},
                     {"threshold", threshold},
                     {"smallest_kept", smallest_kept},
                     {"largest_dropped", largest_dropped},
                     {"indeterminate", indeterminate},
                     {"m_max", m_max},
                     {"guard", guard}};
    if (cocycle_value) {
      j["cocycle_value"] = {cocycle_value->real(), cocycle_value->imag()};
      j["cocycle_route"] = cocycle_route;
    }
    return j;
  }
};

namespace detail {

struct KernelCount {
  int dim = 0;
  double smallest_kept = INFINITY, largest_dropped = 0.0;
};

// dim ker of P X P restricted to domain shells <= dom_shell, codomain the full P-range.
inline KernelCount compressed_kernel(const OpMatrix& X, int dom_shell, double thr) {
  const int N = X.N;
  const Truncation& t = X(0, 0).trunc();
  // P-vectors: i2 == m, indexed by (block, m, j2)
  std::vector<std::size_t> p_index;  // basis index of P-vectors
  for (int m = 0; m <= t.m_max; ++m)
    for (int j2 = -m; j2 <= m; j2 += 2) p_index.push_back(t.index({m, m, j2}));
  const std::size_t np = p_index.size();
  std::vector<std::int64_t> p_pos(t.dim(), -1);
  for (std::size_t k = 0; k < np; ++k) p_pos[p_index[k]] = static_cast<std::int64_t>(k);

  // columns: (block b, P-vector k) with shell <= dom_shell; rows: (block a, P-vector)
  std::vector<std::size_t> cols;
  for (int bcol = 0; bcol < N; ++bcol)
    for (std::size_t k = 0; k < np; ++k)
      if (t.label(p_index[k]).m <= dom_shell) cols.push_back(static_cast<std::size_t>(bcol) * np + k);
  const std::size_t nrows = static_cast<std::size_t>(N) * np;

  // union-find over columns and rows
  std::vector<std::size_t> parent(cols.size() + nrows);
  for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = k;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::pair<std::size_t, cplx>>> colent(cols.size());
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    const int bcol = static_cast<int>(cols[ci] / np);
    const std::size_t src = p_index[cols[ci] % np];
    for (int a = 0; a < N; ++a)
      for (const auto& e : X(a, bcol).column(src)) {
        const std::int64_t pr = p_pos[e.row];
        if (pr < 0) continue;
        const std::size_t row = static_cast<std::size_t>(a) * np + static_cast<std::size_t>(pr);
        colent[ci].emplace_back(row, e.val);
        parent[find(ci)] = find(cols.size() + row);
      }
  }
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> comps;
  for (std::size_t ci = 0; ci < cols.size(); ++ci) comps[find(ci)].first.push_back(ci);
  for (std::size_t r = 0; r < nrows; ++r) {
    auto it = comps.find(find(cols.size() + r));
    if (it != comps.end()) it->second.second.push_back(r);
  }
  KernelCount kc;
  for (auto& [root, cr] : comps) {
    auto& [cs, rs] = cr;
    std::map<std::size_t, Eigen::Index> rpos;
    for (std::size_t k = 0; k < rs.size(); ++k) rpos[rs[k]] = static_cast<Eigen::Index>(k);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rs.size()), static_cast<Eigen::Index>(cs.size()));
    for (std::size_t k = 0; k < cs.size(); ++k)
      for (const auto& [row, v] : colent[cs[k]]) M(rpos[row], static_cast<Eigen::Index>(k)) += v;
    int rank = 0;
    if (M.rows() > 0) {
      Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
      const auto& sv = svd.singularValues();
      for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > thr) {
          ++rank;
          kc.smallest_kept = std::min(kc.smallest_kept, sv(k));
        } else {
          kc.largest_dropped = std::max(kc.largest_dropped, sv(k));
        }
      }
    }
    kc.dim += static_cast<int>(cs.size()) - rank;
  }
  return kc;
}

inline double column_norm_max(const OpMatrix& X) {
  const Truncation& t = X(0, 0).trunc();
  double v = 0.0;
  const std::size_t end = shell_offset(X(0, 0).trunc().m_max - 2);
  for (int b = 0; b < X.N; ++b)
    for (std::size_t c = 0; c < std::min(end, t.dim()); ++c) {
      double s = 0.0;
      for (int a = 0; a < X.N; ++a)
        for (const auto& e : X(a, b).column(c)) s += std::norm(e.val);
      v = std::max(v, std::sqrt(s));
    }
  return v;
}

}  // namespace detail

// Residual of u*u - 1 and uu* - 1 on the interior.
inline double unitarity_residual(const NCMatrix& u, const RepContext& R) {
  const OpMatrix U = represent_matrix(u, R);
  const OpMatrix Us = represent_matrix(u.adjoint(), R);
  const OpMatrix I = represent_matrix(NCMatrix::identity(u.N), R);
  return std::max((Us * U - I).max_abs_interior(), (U * Us - I).max_abs_interior());
}

inline IndexResult numeric_index(const NCMatrix& u, const RepContext& R, double rel_threshold = 1e-8) {
  const OpMatrix U = represent_matrix(u, R);
  const OpMatrix Us = represent_matrix(u.adjoint(), R);
  int reach = 0;
  for (const auto& b : U.blocks) reach = std::max(reach, b.reach());
  const int dom = R.trunc().m_max - reach;
  IndexResult r;
  r.m_max = R.trunc().m_max;
  r.guard = R.trunc().guard;
  const double nrm = std::max(detail::column_norm_max(U), 1e-300);
  r.threshold = rel_threshold * nrm;
  const auto k1 = detail::compressed_kernel(U, dom, r.threshold);
  const auto k2 = detail::compressed_kernel(Us, dom, r.threshold);
  r.kernel_dims = {k1.dim, k2.dim};
  r.numeric_index = k1.dim - k2.dim;
  r.smallest_kept = std::min(k1.smallest_kept, k2.smallest_kept);
  r.largest_dropped = std::max(k1.largest_dropped, k2.largest_dropped);
  r.indeterminate = (r.smallest_kept < 10.0 * r.threshold) || (r.largest_dropped > r.threshold / 10.0);
  return r;
}

struct PairingValue {
  cplx phi1, phi3;
  cplx value() const { return phi1 - phi3; }
};

// phi_1(u* du) - phi_3(u* du du* du)
inline PairingValue cocycle_pairing(const NCMatrix& u, const CochainEngine& E, Phi1Route route) {
  const MatForm U = MatForm::from_matrix(u), Us = MatForm::from_matrix(u.adjoint());
  const MatForm one = Us * U.d();
  const MatForm three = Us * U.d() * Us.d() * U.d();
  PairingValue p;
  p.phi1 = E.phi1(one, route);
  p.phi3 = route == Phi1Route::cm ? E.phi3_cm(three) : E.phi3(three);
  return p;
}

inline IndexResult index_pairing(const NCMatrix& u, const CochainEngine& E, Phi1Route route,
                                 double rel_threshold = 1e-8) {
  const RepContext& R = E.rep();
  if (unitarity_residual(u, R) > 1e-12) throw std::invalid_argument("index_pairing: u is not unitary");
  IndexResult r = numeric_index(u, R, rel_threshold);
  r.cocycle_value = cocycle_pairing(u, E, route).value();
  r.cocycle_route = to_string(route);
  return r;
}

// ---- gauge shift ---------------------------------------------------------------

struct GaugeShiftReport {
  cplx dS, dphi3_part, dphi1_part;
  cplx expected;  // 2 pi k Index
  int index = 0;
  std::string route;
  cplx difference() const { return dS - expected; }
  nlohmann::json to_json() const {
    return {{"route", route},
            {"dS", {dS.real(), dS.imag()}},
            {"dphi3_term", {dphi3_part.real(), dphi3_part.imag()}},
            {"dphi1_term", {dphi1_part.real(), dphi1_part.imag()}},
            {"expected", {expected.real(), expected.imag()}},
            {"index", index},
            {"difference", {difference().real(), difference().imag()}}};
  }
};

inline GaugeShiftReport gauge_shift_check(const MatForm& A, const NCMatrix& u, const CochainEngine& E, int level,
                                          Phi1Route route, int index) {
  const MatForm Au = gauge(A, u);
  const ActionBreakdown s0 = E.action(A, level, route, false);
  const ActionBreakdown s1 = E.action(Au, level, route, false, false);
  GaugeShiftReport g;
  g.route = to_string(route);
  g.dS = s1.total - s0.total;
  g.dphi3_part = 6.0 * kPi * level * (s1.phi3_part - s0.phi3_part);
  g.dphi1_part = -2.0 * kPi * level * (s1.phi1_part - s0.phi1_part);
  g.index = index;
  g.expected = 2.0 * kPi * level * static_cast<double>(index);
  return g;
}

// ---- gauge fixing ----------------------------------------------------------------

// Noncommutative polynomial in x_0..x_K: monomials are ordered variable sequences.
struct GaugePoly {
  std::map<std::vector<int>, cplx> terms;
  int max_var() const {
    int k = -1;
    for (const auto& [m, c] : terms)
      for (int v : m) k = std::max(k, v);
    return k;
  }
};

inline NCMatrix delta_matrix(const NCMatrix& x) {
  NCMatrix r(x.N);
  for (std::size_t k = 0; k < x.e.size(); ++k) r.e[k] = delta_symbolic(x.e[k]);
  return r;
}

// h(A) = sum_i h(a_i delta(b_i), ..., delta^K(a_i delta(b_i))), one i per elementary tuple.
inline NCMatrix gauge_fixing_eval(const GaugePoly& h, const MatForm& A) {
  if (A.degree() != 1) throw std::invalid_argument("gauge_fixing_eval: degree-1 form expected");
  const int N = A.N();
  const int K = std::max(h.max_var(), 0);
  NCMatrix total(N);
  for (const auto& [t, c] : A.terms()) {
    NCMatrix a(N), bm(N);
    a(t[0].r, t[0].c) = NCPoly(t[0].w, c);
    bm(t[1].r, t[1].c) = NCPoly(t[1].w);
    std::vector<NCMatrix> xs;
    NCMatrix lad_a(N);
    lad_a.e = a.e;
    for (auto& p : lad_a.e) p = to_ladder(p);
    xs.push_back(lad_a * delta_matrix(bm));
    for (int n = 1; n <= K; ++n) xs.push_back(delta_matrix(xs.back()));
    for (const auto& [mono, hc] : h.terms) {
      NCMatrix m = NCMatrix::identity(N);
      for (int v : mono) m = m * xs[static_cast<std::size_t>(v)];
      for (auto& p : m.e) p *= hc;
      total = total + m;
    }
  }
  return total;
}

struct ReductionReport {
  cplx full, reduced;
  bool exact_equal = false;
};

// (1/2 pi) \int Tr sigma(h(A))^2 versus the same with A_1.
inline ReductionReport reduction_check(const GaugePoly& h, const MatForm& A) {
  auto value = [&](const MatForm& X) {
    const FourierMatrix s = sigma_q(gauge_fixing_eval(h, X));
    return (s * s).trace().mean();
  };
  ReductionReport r;
  r.full = value(A);
  r.reduced = value(decompose(A).A1);
  r.exact_equal = r.full == r.reduced;
  return r;
}

}  // namespace suqcs
