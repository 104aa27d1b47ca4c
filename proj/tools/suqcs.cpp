// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "suqcs/suqcs.hpp"

using namespace suqcs;
using nlohmann::json;

namespace {

json cjson(cplx z) { return {z.real(), z.imag()}; }

void emit(const Config& cfg, const json& j, const std::string& csv = {}) {
  if (cfg.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  const bool want_csv = cfg.out.size() > 4 && cfg.out.substr(cfg.out.size() - 4) == ".csv";
  std::ofstream f(cfg.out);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  if (want_csv && !csv.empty()) f << csv;
  else f << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
}

Phi1Route route_of(const Config& c) { return c.phi1_route == "cm" ? Phi1Route::cm : Phi1Route::symbolic; }

EngineConfig engine_config(const Config& c) {
  EngineConfig e;
  e.q = c.q;
  e.trunc = Truncation(c.m_max, c.guard);
  return e;
}

int cmd_relations(const Config& c) {
  const RelationReport r = relation_residual(c.q, Truncation(c.m_max, c.guard));
  json j{{"q", c.q}, {"m_max", c.m_max}, {"interior_shell", r.interior_shell}};
  for (std::size_t k = 0; k < r.residual.size(); ++k) j["residuals"][RelationReport::names[k]] = r.residual[k];
  j["max"] = r.max();
  j["pass"] = r.max() <= c.tolerances.at("relations");
  emit(c, j);
  return 0;
}

int cmd_residues(const Config& c, const std::string& text) {
  const NCPoly x = parse_poly(text);
  const RepContext R(c.q, Truncation(c.m_max, c.guard));
  if (static_cast<int>(x.max_length()) > c.guard)
    throw ConfigError("word longer than the guard band; raise --guard");
  const ShiftOp op = R.poly(x);
  const ShellSeries s = shell_traces(op);
  PoleModel m;
  if (c.q > 0) m.geometric = c.q;
  const PoleFit f = fit_poles(s, m);
  const ResidueReport rep = residue_report(f, {-1, -2, -3}, 0);
  json j{{"expression", text}, {"q", c.q}, {"report", rep.to_json()}, {"symbol_mean", cjson(sigma_q(x).mean())}};
  try {
    PoleModel m0;
    m0.min_power = 0;
    j["regularized_trace"] = cjson(phi0_reg(s, fit_poles(s, m0)).value);
  } catch (const std::exception& e) {
    j["regularized_trace_error"] = e.what();
  }
  emit(c, j, s.to_csv());
  return 0;
}

int cmd_action(const Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json input;
  in >> input;
  const CochainEngine E(engine_config(c));
  ClosedFormOptions o;
  o.q = c.q;
  o.level = c.level;
  json j{{"q", c.q}, {"level", c.level}};
  ActionCoefficients coeffs;
  if (input.contains("form")) {
    const MatForm A = MatForm::from_json(input.at("form"));
    const ActionBreakdown b = E.action(A, c.level, route_of(c));
    j["direct"] = b.to_json();
    coeffs = extract_coeffs(decompose(A).A1);
  } else {
    coeffs = ActionCoefficients::from_json(input.contains("coefficients") ? input.at("coefficients") : input);
  }
  j["coefficients"] = coeffs.to_json();
  j["closed_form"] = action_closed_form(coeffs, o, &E).to_json();
  const ClosedFormPhi1 p1 = closed_form_phi1(coeffs, o, &E);
  j["closed_form_phi1_terms"] = {{"F", cjson(p1.f_term)},
                                 {"Re", cjson(p1.re_term)},
                                 {"Im_sq", cjson(p1.im_sq_term)},
                                 {"H", cjson(p1.h_term)},
                                 {"cubic", cjson(p1.cubic_term)}};
  emit(c, j);
  return 0;
}

int cmd_index(const Config& c) {
  const CochainEngine E(engine_config(c));
  const NCMatrix u = fundamental_unitary(c.q);
  const IndexResult r = index_pairing(u, E, route_of(c));
  emit(c, r.to_json());
  return 0;
}

int cmd_verify_gauge(const Config& c, int forms) {
  EngineConfig ec = engine_config(c);
  const CochainEngine E(ec);
  const NCMatrix u = fundamental_unitary(c.q);
  const IndexResult ir = numeric_index(u, E.rep());
  FormSampler S(c.seed);
  json table = json::array();
  for (int k = 0; k < forms; ++k) {
    const MatForm A = S.hermitian_one_form(2, 2, 2, 0.3);
    table.push_back(gauge_shift_check(A, u, E, c.level, route_of(c), ir.numeric_index).to_json());
  }
  const PairingValue pv = cocycle_pairing(u, E, route_of(c));
  emit(c, {{"q", c.q},
           {"route", c.phi1_route},
           {"index", ir.to_json()},
           {"pairing", cjson(pv.value())},
           {"expected_shift_from_pairing", cjson(2.0 * kPi * c.level * pv.value())},
           {"table", table}});
  return 0;
}

int cmd_optimize(const Config& c, const std::string& method, double tol, int starts, bool hermitian) {
  StationaryProblem p;
  p.q = c.q;
  p.level = c.level;
  p.K = c.K;
  p.hermitian = hermitian;
  ClosedFormOptions o;
  o.q = c.q;
  o.level = c.level;
  const CochainEngine E(engine_config(c));
  p.linear = closed_form_linear(p, o, &E);
  p.phi1_route = "closed-form";
  const StationaryObjective f(p);
  SearchOptions so;
  so.method = method == "gd" ? SearchMethod::gradient_descent : SearchMethod::damped_newton;
  so.tol = tol;
  json runs = json::array();
  std::string csv;
  for (int s = 0; s < starts; ++s) {
    const StationaryReport r = find_stationary(f, random_start(f.dim(), c.seed + static_cast<std::uint64_t>(s)), so);
    json rj = r.to_json();
    rj["seed"] = c.seed + static_cast<std::uint64_t>(s);
    runs.push_back(rj);
    if (s == 0) csv = r.trajectory_csv();
  }
  emit(c, {{"K", c.K}, {"q", c.q}, {"level", c.level}, {"variables", f.dim()}, {"runs", runs}}, csv);
  return 0;
}

json discrepancy_ledger(const Config& c) {
  json items = json::array();
  auto item = [&](const std::string& name, const std::string& adjudication, json numbers) {
    items.push_back({{"item", name}, {"adjudication", adjudication}, {"numbers", std::move(numbers)}});
  };
  EngineConfig e0;
  e0.trunc = Truncation(60, 8);
  const CochainEngine E0(e0);
  const auto H1 = E0.H(1);
  item("H_1 at q = 0", "explicit and regularized routes differ by sign; only b phi_0 enters phi_1",
       {{"explicit", H1.explicit_q0->real()}, {"regularized", H1.regularized.real()}});

  json rows = json::array();
  for (double q : {0.0, c.q > 0 ? c.q : 0.3}) {
    EngineConfig ec = e0;
    ec.q = q;
    const CochainEngine E(ec);
    for (auto [a, b] : std::vector<std::pair<Letter, Letter>>{{Letter::as, Letter::a}, {Letter::a, Letter::as},
                                                              {Letter::bs, Letter::b}, {Letter::b, Letter::bs}}) {
      const MatForm w = MatForm::chain(std::vector<NCPoly>{NCPoly::letter(a), NCPoly::letter(b)});
      rows.push_back({{"q", q},
                      {"form", std::string(letter_name(a)) + " d" + letter_name(b)},
                      {"symbolic", cjson(E.phi1(w, Phi1Route::symbolic))},
                      {"cm", cjson(E.phi1(w, Phi1Route::cm))}});
    }
  }
  item("phi_1 routes", "cm route in Wodzicki normalization agrees with the explicit-phi_0 symbolic route at q = 0; "
                       "the chi route deviates for q > 0",
       rows);

  json idx = json::array();
  for (double q : {0.0, 0.3}) {
    EngineConfig ec = e0;
    ec.q = q;
    const CochainEngine E(ec);
    const NCMatrix u = fundamental_unitary(q);
    const IndexResult ir = numeric_index(u, E.rep());
    idx.push_back({{"q", q},
                   {"index", ir.numeric_index},
                   {"pairing_cm", cjson(cocycle_pairing(u, E, Phi1Route::cm).value())},
                   {"pairing_symbolic", cjson(cocycle_pairing(u, E, Phi1Route::symbolic).value())}});
  }
  item("index pairing", "pairing is +2 in Wodzicki normalization against Index(PuP) = -1", idx);

  {
    FormSampler S(c.seed);
    const MatForm A = S.hermitian_one_form(1, 3, 3, 1.0);
    const ActionCoefficients co = extract_coeffs(decompose(A).A1);
    const cplx cf = closed_form_phi3(co);
    const cplx two3 = acceptance::cs3(E0, A, 2.0 / 3.0), one = acceptance::cs3(E0, A, 1.0);
    const MatForm A2 = S.hermitian_one_form(2, 3, 3, 1.0);
    item("cubic coefficient in the closed form", "2/3 matches for N = 1; the matrix case does not factor",
         {{"closed_form", cjson(cf)},
          {"direct_two_thirds", cjson(two3)},
          {"direct_unit", cjson(one)},
          {"N2_direct", cjson(acceptance::cs3(E0, A2, 2.0 / 3.0))},
          {"N2_closed_form", cjson(closed_form_phi3(extract_coeffs(decompose(A2).A1)))}});
  }
  {
    EngineConfig ec = e0;
    ec.q = c.q > 0 ? c.q : 0.3;
    const CochainEngine E(ec);
    item("F_k summation offset", "tau_0(r_-(a a*)) = 1 + F_1 with the sum from x = 0",
         {{"q", ec.q}, {"tau0", cjson(E.tau0_alpha_pair(1))}, {"F_1", F_k(1, ec.q).value}});
    const MatForm w = MatForm::chain(std::vector<NCPoly>{NCPoly::letter(Letter::as), NCPoly::letter(Letter::a)});
    item("chi imaginary part", "the second-derivative term contributes i/2 per unit symbol",
         {{"q", ec.q}, {"chi(a* da)", cjson(E.chi(w))}});
  }
  {
    json cf = json::array();
    for (double q : {0.0, c.q > 0 ? c.q : 0.3}) {
      EngineConfig ec = e0;
      ec.q = q;
      const CochainEngine E(ec);
      for (auto [k, l] : std::vector<std::pair<int, int>>{{-1, 1}, {1, -1}, {-2, 2}, {2, -2}}) {
        const MatForm A =
            MatForm::chain(std::vector<NCPoly>{NCPoly(alpha_power(k)), NCPoly(alpha_power(l))}).hermitize();
        const ActionCoefficients co = extract_coeffs(decompose(A).A1);
        ClosedFormOptions literal;
        literal.q = q;
        ClosedFormOptions direct = literal;
        direct.literal_bphi0 = false;
        cf.push_back({{"q", q},
                      {"k", k},
                      {"l", l},
                      {"symbolic", cjson(E.phi1(A, Phi1Route::symbolic))},
                      {"cm", cjson(E.phi1(A, Phi1Route::cm))},
                      {"closed_literal", cjson(closed_form_phi1(co, literal, &E).total())},
                      {"closed_direct_bphi0", cjson(closed_form_phi1(co, direct, &E).total())}});
      }
    }
    item("closed-form phi_1", "with b phi_0 evaluated directly the closed form matches both routes at q = 0; "
                              "the literal boundary term carries an extra factor 2 and starts at j = 1; "
                              "for q > 0 no two evaluations agree",
         cf);
  }
  return {{"ledger", items}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic cochains, shifted action and index on SU_q(2)"};
  app.require_subcommand(1);
  Config cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");
  auto* o_q = app.add_option("--q", cfg.q, "deformation parameter in [0,1)");
  auto* o_m = app.add_option("--m-max", cfg.m_max, "largest doubled spin kept");
  auto* o_g = app.add_option("--guard", cfg.guard, "guard band in shells");
  auto* o_K = app.add_option("--K", cfg.K, "coefficient cutoff");
  auto* o_l = app.add_option("--level", cfg.level, "level k");
  auto* o_N = app.add_option("--N", cfg.N, "matrix size");
  auto* o_s = app.add_option("--seed", cfg.seed, "random seed");
  auto* o_r = app.add_option("--route", cfg.phi1_route, "phi_1 route")->check(CLI::IsMember({"symbolic", "cm"}));
  auto* o_o = app.add_option("--out", cfg.out, "output path (.json or .csv)");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  auto* dlsv_cmd = app.add_subcommand("dlsv-residues", "residues of the isospectral Dirac operator");
  int j_max = 60;
  dlsv_cmd->add_option("--j-max", j_max, "spin cutoff");
  auto* relations_cmd = app.add_subcommand("relations", "defining relation residuals");
  auto* residues_cmd = app.add_subcommand("residues", "residues and symbol of a word expression");
  std::string word;
  residues_cmd->add_option("word", word, "expression such as \"a* a + b* b\"")->required();
  auto* action_cmd = app.add_subcommand("action", "action of coefficients or a form");
  std::string coeffs;
  action_cmd->add_option("coeffs", coeffs, "JSON file")->required()->check(CLI::ExistingFile);
  auto* gauge_cmd = app.add_subcommand("verify-gauge", "gauge shift against the index");
  int forms = 5;
  gauge_cmd->add_option("--forms", forms, "number of random forms");
  auto* index_cmd = app.add_subcommand("index", "Fredholm index and cocycle pairing");
  auto* opt_cmd = app.add_subcommand("optimize", "stationary points of the action");
  std::string method = "newton";
  double tol = 1e-10;
  int starts = 1;
  bool hermitian = false;
  opt_cmd->add_option("--method", method, "newton or gd")->check(CLI::IsMember({"newton", "gd"}));
  opt_cmd->add_option("--tol", tol, "gradient tolerance");
  opt_cmd->add_option("--starts", starts, "number of random starts");
  opt_cmd->add_flag("--hermitian", hermitian, "impose hermiticity relations");
  auto* ledger_cmd = app.add_subcommand("ledger", "convention discrepancies with numbers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      Config file = Config::load(config_path);
      // command-line flags take precedence
      if (!o_q->count()) cfg.q = file.q;
      if (!o_m->count()) cfg.m_max = file.m_max;
      if (!o_g->count()) cfg.guard = file.guard;
      if (!o_K->count()) cfg.K = file.K;
      if (!o_l->count()) cfg.level = file.level;
      if (!o_N->count()) cfg.N = file.N;
      if (!o_s->count()) cfg.seed = file.seed;
      if (!o_r->count()) cfg.phi1_route = file.phi1_route;
      if (!o_o->count()) cfg.out = file.out;
      cfg.tolerances = file.tolerances;
    }
    cfg.validate();

    if (selftest->parsed()) {
      const auto rs = run_acceptance(cfg.seed, [](const CriterionResult& r) { std::fprintf(stderr, "%s\n", r.line().c_str()); });
      json j{{"criteria", json::array()}, {"hard_pass", hard_criteria_pass(rs)}};
      for (const auto& r : rs) j["criteria"].push_back(r.to_json());
      emit(cfg, j);
      return hard_criteria_pass(rs) ? 0 : 1;
    }
    if (dlsv_cmd->parsed()) {
      emit(cfg, dlsv_residues(j_max).to_json());
      return 0;
    }
    if (relations_cmd->parsed()) return cmd_relations(cfg);
    if (residues_cmd->parsed()) return cmd_residues(cfg, word);
    if (action_cmd->parsed()) return cmd_action(cfg, coeffs);
    if (gauge_cmd->parsed()) return cmd_verify_gauge(cfg, forms);
    if (index_cmd->parsed()) return cmd_index(cfg);
    if (opt_cmd->parsed()) return cmd_optimize(cfg, method, tol, starts, hermitian);
    if (ledger_cmd->parsed()) {
      emit(cfg, discrepancy_ledger(cfg));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
