// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>
#include "zeta.hpp"

namespace suqcs {

// Spectrum of the equivariant Dirac operator on the isospectral triple, diagonal in its basis.
struct DlsvShell {
  int j2;             // doubled spin
  bool up;            // positive eigenvalue branch
  double eigenvalue;  // 2j + 3/2 (up) or -(2j + 1/2)
  long multiplicity;  // (2j+1)(2j+2) or (2j+1)(2j)
};

class DlsvSpectrum {
 public:
  explicit DlsvSpectrum(int j2_max) : j2_max_(j2_max) {
    if (j2_max < 0) throw std::invalid_argument("DlsvSpectrum: negative cutoff");
    for (int j2 = 0; j2 <= j2_max; ++j2) {
      // mu in {-j..j}: 2j+1 values; n in {-j^+..j^+} with j^+ = j + 1/2, or j^- = j - 1/2
      const long mu = j2 + 1;
      shells_.push_back({j2, true, j2 + 1.5, mu * (j2 + 2)});
      if (j2 > 0) shells_.push_back({j2, false, -(j2 + 0.5), mu * j2});
    }
  }

  const std::vector<DlsvShell>& shells() const { return shells_; }
  int j2_max() const { return j2_max_; }

  // Shell traces of T = 1 (or P_up) grouped by |eigenvalue|; only complete shells are kept.
  ShellSeries series(bool up_only) const {
    std::map<double, double> acc;
    for (const auto& s : shells_)
      if (!up_only || s.up) acc[std::abs(s.eigenvalue)] += static_cast<double>(s.multiplicity);
    // |lambda| = j2 + 3/2 receives the up shell j2 and the down shell j2 + 1
    const double top = j2_max_ + 0.5;
    ShellSeries r;
    for (const auto& [lam, t] : acc) {
      if (lam > top) continue;
      r.lambda.push_back(lam);
      r.t.push_back(t);
      r.boundary.push_back(false);
    }
    return r;
  }

 private:
  int j2_max_;
  std::vector<DlsvShell> shells_;
};

// sum over |lambda| = l + 1/2 of c_2 lambda^2 + c_0: the Hurwitz decomposition
// sum_l (c_2 lambda^{2-s} + c_0 lambda^{-s}) = c_2 zeta_H(s-2, 3/2) + c_0 zeta_H(s, 3/2).
struct HurwitzDecomposition {
  double c2 = 0.0, c0 = 0.0;
  double residue(int s) const { return s == 3 ? c2 : s == 1 ? c0 : 0.0; }
};

inline HurwitzDecomposition dlsv_exact(bool up_only) {
  // 2(lambda^2 - 1/4) in total, lambda^2 - 1/4 on the up branch
  return up_only ? HurwitzDecomposition{1.0, -0.25} : HurwitzDecomposition{2.0, -0.5};
}

struct DlsvResidueReport {
  int j_max = 0;
  double residue_full = 0.0, residue_up = 0.0;
  double exact_full = 0.0, exact_up = 0.0;
  PoleFit fit_full, fit_up;

  nlohmann::json to_json() const {
    return {{"j_max", j_max},
            {"res_absD_-3", residue_full},
            {"res_Pup_absD_-3", residue_up},
            {"hurwitz_res_absD_-3", exact_full},
            {"hurwitz_res_Pup_absD_-3", exact_up},
            {"fit_full", fit_full.to_json()},
            {"fit_up", fit_up.to_json()}};
  }
};

inline DlsvResidueReport dlsv_residues(int j_max) {
  if (j_max < 20) throw std::invalid_argument("dlsv_residues: j_max must be at least 20");
  const DlsvSpectrum sp(2 * j_max);
  DlsvResidueReport r;
  r.j_max = j_max;
  PoleModel m;
  m.max_power = 2;
  m.min_power = -2;
  r.fit_full = fit_poles(sp.series(false), m);
  r.fit_up = fit_poles(sp.series(true), m);
  r.residue_full = wres(r.fit_full, -3).real();
  r.residue_up = wres(r.fit_up, -3).real();
  r.exact_full = dlsv_exact(false).residue(3);
  r.exact_up = dlsv_exact(true).residue(3);
  return r;
}

}  // namespace suqcs
