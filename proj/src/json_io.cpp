#include "pde2ode/json_io.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/render.hpp"

#include <cmath>

namespace pde2ode {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Derivative& d, const Signature& sig) {
  return Json{{"dep", sig.dep_names.at(static_cast<std::size_t>(d.dep))}, {"idx", d.idx}};
}

Json to_json(const DiffPolynomial& p, const Signature& sig) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json factors = Json::array();
    for (const auto& [d, e] : m.factors)
      factors.push_back({{"dep", sig.dep_names.at(static_cast<std::size_t>(d.dep))}, {"idx", d.idx}, {"exp", e}});
    Json indep = Json::array();
    for (const auto& [v, e] : m.indep) indep.push_back({{"var", sig.indep_names.at(static_cast<std::size_t>(v))}, {"exp", e}});
    terms.push_back({{"coeff", to_string(c)}, {"factors", factors}, {"indep", indep}});
  }
  return terms;
}

Json to_json(const RationalExpr& e, const Signature& sig) {
  return Json{{"num", to_json(e.num(), sig)}, {"den", to_json(e.den(), sig)}};
}

Json to_json(const Signature& sig) { return Json{{"vars", sig.indep_names}, {"funcs", sig.dep_names}}; }

namespace {

Json poly_entry(const DiffPolynomial& p, const Signature& sig, const TermOrder& order) {
  return Json{{"text", render(p, sig, DerivativeStyle::Compact, order)}, {"poly", to_json(p, sig)}};
}

Json expr_entry(const RationalExpr& e, const Signature& sig, const TermOrder& order) {
  return Json{{"text", render(e, sig, DerivativeStyle::Compact, order)}, {"expr", to_json(e, sig)}};
}

Json header() { return Json{{"schema", kSchema}}; }

}  // namespace

Json to_json(const SystemSource& src) {
  Json j = header();
  j["signature"] = to_json(src.signature);
  Json eqs = Json::array();
  for (const auto& e : src.equations) eqs.push_back(poly_entry(e, src.signature, TermOrder()));
  j["equations"] = eqs;
  Json ineqs = Json::array();
  for (const auto& g : src.inequations) ineqs.push_back(poly_entry(g, src.signature, TermOrder()));
  j["inequations"] = ineqs;
  j["options"] = src.options;
  return j;
}

Json to_json(const RifForm& f) {
  const Signature& sig = f.signature;
  TermOrder order = f.ranking.term_order();
  Json j = header();
  j["signature"] = to_json(sig);
  Json ranking{{"kind", "grlex"}};
  Json indep = Json::array();
  for (int i : f.ranking.indep_order()) indep.push_back(sig.indep_names.at(static_cast<std::size_t>(i)));
  Json dep = Json::array();
  for (int d : f.ranking.dep_order()) dep.push_back(sig.dep_names.at(static_cast<std::size_t>(d)));
  ranking["indep_order"] = indep;
  ranking["dep_order"] = dep;
  j["ranking"] = ranking;
  j["status"] = f.status == RifStatus::Complete ? "complete" : "iteration_capped";
  Json rules = Json::array();
  for (const auto& r : f.rules) {
    rules.push_back({{"lead", to_json(r.lead, sig)},
                     {"lead_text", compact_name(r.lead, sig)},
                     {"rhs_text", render(r.rhs, sig, DerivativeStyle::Compact, order)},
                     {"rhs", to_json(r.rhs, sig)},
                     {"pivot", poly_entry(r.pivot, sig, order)}});
  }
  j["rules"] = rules;
  Json cons = Json::array();
  for (const auto& c : f.constraints) cons.push_back(poly_entry(c, sig, order));
  j["constraints"] = cons;
  Json ineqs = Json::array();
  for (const auto& g : f.inequations) ineqs.push_back(poly_entry(g, sig, order));
  j["inequations"] = ineqs;
  return j;
}

Json to_json(const RifForm& f, const InitialData& id) {
  const Signature& sig = f.signature;
  TermOrder order = f.ranking.term_order();
  Json j = header();
  Json par = Json::array();
  Json data = Json::array();
  std::string at = "(";
  for (std::size_t i = 0; i < id.point_symbols.size(); ++i) at += (i ? ", " : "") + id.point_symbols[i];
  at += ")";
  for (std::size_t k = 0; k < id.parametric.size(); ++k) {
    par.push_back(compact_name(id.parametric[k], sig));
    data.push_back(compact_name(id.parametric[k], sig) + at + " = " + id.constants[k]);
  }
  j["parametric"] = par;
  j["dimension"] = id.dimension();
  Json cons = Json::array();
  for (const auto& c : constraints_among_parametric(f, id)) cons.push_back(poly_entry(c, sig, order));
  j["constraints_among_parametric"] = cons;
  j["point_symbols"] = id.point_symbols;
  j["constants"] = id.constants;
  j["initial_data"] = data;
  j["finite_dimensional"] = true;
  return j;
}

Json to_json(const ParametricOdeSystem& p, const CompatibilityReport* report) {
  const Signature& sig = p.state_signature;
  TermOrder order = p.state_order();
  Json j = header();
  Json states = Json::array();
  for (std::size_t k = 0; k < p.n_states(); ++k)
    states.push_back({{"name", p.state_names()[k]}, {"source", to_json(p.sources[k], p.source_signature)}});
  j["states"] = states;
  Json odes = Json::object();
  for (std::size_t i = 0; i < p.n_indep(); ++i) {
    Json sys = Json::array();
    for (std::size_t k = 0; k < p.n_states(); ++k) {
      Json e = expr_entry(p.odes[i][k], sig, order);
      e["state"] = p.state_names()[k];
      sys.push_back(e);
    }
    odes[sig.indep_names[i]] = sys;
  }
  j["odes"] = odes;
  Json cons = Json::array();
  for (const auto& c : p.constraints) cons.push_back(poly_entry(c, sig, order));
  j["constraints"] = cons;
  Json ineqs = Json::array();
  for (const auto& g : p.inequations) ineqs.push_back(poly_entry(g, sig, order));
  j["inequations"] = ineqs;
  if (report) {
    Json res = Json::array();
    for (const auto& r : report->residuals) {
      Json e = expr_entry(r.residual, sig, order);
      if (r.kind == CompatibilityResidual::Kind::CrossDerivative) {
        e["kind"] = "cross_derivative";
        e["vars"] = {sig.indep_names[r.i], sig.indep_names[r.j]};
        e["state"] = p.state_names()[r.index];
      } else {
        e["kind"] = "constraint";
        e["var"] = sig.indep_names[r.i];
        e["constraint"] = r.index;
      }
      res.push_back(e);
    }
    j["compatibility"] = {{"compatible", report->compatible()}, {"checks", report->checks}, {"residuals", res}};
  }
  return j;
}

Json to_json(const MultiplicationSystem& ms, const RootSet& rs) {
  Json j = header();
  j["dimension"] = ms.dimension();
  j["basis"] = ms.basis_names;
  Json nonzeros = Json::array();
  for (const auto& x : ms.matrices) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) count += x(r, c) != 0;
    nonzeros.push_back(count);
  }
  j["matrix_nonzeros"] = nonzeros;
  j["commuting"] = true;
  Json combo = Json::array();
  for (const auto& c : rs.combination) combo.push_back(to_string(c));
  j["combination"] = combo;
  Json roots = Json::array();
  for (const auto& r : rs.roots) {
    Json coords = Json::array();
    for (const auto& z : r.coords) coords.push_back({{"re", z.real()}, {"im", z.imag()}});
    roots.push_back({{"coords", coords}, {"residual", r.residual}, {"multiplicity", r.multiplicity}});
  }
  j["roots"] = roots;
  return j;
}

Json to_json(const Trajectory& t) {
  Json j = header();
  j["indep"] = t.indep_names;
  j["states"] = t.state_names;
  Json samples = Json::array();
  for (const auto& s : t.samples) {
    Json e{{"t", s.t}, {"x", s.x}, {"v", s.v}, {"max_drift", s.drift}};
    if (std::isfinite(s.pivot_margin)) {
      e["min_pivot"] = s.pivot_margin;
    } else {
      e["min_pivot"] = nullptr;
    }
    samples.push_back(e);
  }
  j["samples"] = samples;
  return j;
}

Trajectory trajectory_from_json(const Json& j) {
  try {
    Trajectory t;
    t.indep_names = j.at("indep").get<std::vector<std::string>>();
    t.state_names = j.at("states").get<std::vector<std::string>>();
    for (const auto& e : j.at("samples")) {
      Sample s;
      s.t = e.at("t").get<double>();
      s.x = e.at("x").get<std::vector<double>>();
      s.v = e.at("v").get<std::vector<double>>();
      s.drift = e.at("max_drift").get<double>();
      if (!e.at("min_pivot").is_null()) s.pivot_margin = e.at("min_pivot").get<double>();
      t.samples.push_back(std::move(s));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Syntax, std::string("malformed trajectory document: ") + e.what());
  }
}

DiffPolynomial polynomial_from_json(const Json& j, const Signature& sig) {
  try {
    DiffPolynomial p;
    for (const auto& term : j) {
      Monomial m;
      for (const auto& f : term.at("factors")) {
        int dep = sig.find_dep(f.at("dep").get<std::string>());
        if (dep < 0) throw Error(ErrorCode::UnknownSymbol, "unknown function in polynomial document");
        auto idx = f.at("idx").get<std::vector<int>>();
        if (idx.size() != sig.n_indep()) throw Error(ErrorCode::BadArity, "multi-index has the wrong length");
        m = m * Monomial::of(Derivative(dep, idx), f.at("exp").get<int>());
      }
      for (const auto& v : term.at("indep")) {
        int var = sig.find_indep(v.at("var").get<std::string>());
        if (var < 0) throw Error(ErrorCode::UnknownSymbol, "unknown variable in polynomial document");
        m = m * Monomial::of_indep(var, v.at("exp").get<int>());
      }
      p.add_term(m, parse_rational(term.at("coeff").get<std::string>()));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Syntax, std::string("malformed polynomial document: ") + e.what());
  }
}

Json to_json(const StructureConstants& sc, int ode_order) {
  Json j = header();
  j["basis"] = sc.basis_names;
  Json point = Json::object();
  for (std::size_t i = 0; i < sc.point.size() && i < sc.point_signature.n_indep(); ++i)
    point[sc.point_signature.indep_names[i]] = to_string(sc.point[i]);
  j["point"] = point;
  Json brackets = Json::array();
  for (std::size_t a = 0; a < sc.m; ++a) {
    for (std::size_t b = a + 1; b < sc.m; ++b) {
      Json coeffs = Json::array();
      for (const auto& c : sc.values[a][b]) coeffs.push_back(to_string(c));
      Json entry{{"i", a + 1}, {"j", b + 1}, {"coeffs", coeffs}};
      if (!sc.symbolic.empty()) {
        Json sym = Json::array();
        for (const auto& c : sc.symbolic[a][b]) sym.push_back(render(c, sc.point_signature));
        entry["symbolic"] = sym;
      }
      brackets.push_back(entry);
    }
  }
  j["brackets"] = brackets;
  j["derived_dimension"] = derived_algebra_dimension(sc);
  j["derived_abelian"] = derived_algebra_is_abelian(sc);
  if (ode_order >= 0) {
    j["linearizable_for_order"] = {{"order", ode_order}, {"verdict", linearizability_verdict(sc, ode_order)}};
  } else {
    j["linearizable_for_order"] = nullptr;
  }
  return j;
}

}  // namespace pde2ode
