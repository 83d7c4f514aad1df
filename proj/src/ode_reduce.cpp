#include "pde2ode/ode_reduce.hpp"

#include "pde2ode/algebra.hpp"
#include "pde2ode/error.hpp"
#include "pde2ode/render.hpp"

#include <algorithm>
#include <map>

namespace pde2ode {

TermOrder ParametricOdeSystem::state_order() const {
  std::vector<Derivative> src = sources;
  Ranking r = source_ranking;
  return TermOrder([src, r](const Derivative& a, const Derivative& b) {
    auto ka = static_cast<std::size_t>(a.dep);
    auto kb = static_cast<std::size_t>(b.dep);
    if (ka < src.size() && kb < src.size()) return r.compare(src[ka], src[kb]);
    return a <=> b;
  });
}

namespace {

void add_unique(std::vector<DiffPolynomial>& list, const DiffPolynomial& p) {
  if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(p);
}

}  // namespace

ParametricOdeSystem reduce_to_parametric_ode(const RifForm& f) {
  InitialData id = parametric_derivatives(f);
  ParametricOdeSystem out;
  out.source_signature = f.signature;
  out.source_ranking = f.ranking;
  out.sources = id.parametric;
  out.state_signature.indep_names = f.signature.indep_names;
  std::map<Derivative, int> index;
  for (std::size_t k = 0; k < id.parametric.size(); ++k) {
    out.state_signature.dep_names.push_back(compact_name(id.parametric[k], f.signature));
    index.emplace(id.parametric[k], static_cast<int>(k));
  }
  const std::size_t n = f.signature.n_indep();
  auto expressible = [&](const DiffPolynomial& p) {
    for (const auto& d : p.derivatives())
      if (!index.count(d)) return false;
    return true;
  };
  auto to_state = [&](const Derivative& d) {
    auto it = index.find(d);
    if (it == index.end())
      throw Error(ErrorCode::NotClosed, "derivative " + render(d, f.signature) + " is not parametric");
    return Derivative::function(it->second, n);
  };

  Reducer red(f);
  out.odes.assign(n, {});
  std::vector<DiffPolynomial> guards;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& theta : id.parametric) {
      RationalExpr e = red.reduce(DiffPolynomial::of(theta.differentiated(i)));
      out.odes[i].push_back(RationalExpr(rename(e.num(), to_state), rename(e.den(), to_state)));
      if (!e.den().is_constant()) add_unique(guards, e.den());
    }
  }
  TermOrder order = out.state_order();
  for (const auto& c : f.constraints) out.constraints.push_back(normalize_sign_content(rename(c, to_state), order));
  std::vector<DiffPolynomial> ineqs = f.inequations;
  for (const auto& g : guards)
    for (const auto& [atom, e] : split_factors(g, f.ranking.term_order()).atoms) {
      (void)e;
      add_unique(ineqs, atom);
    }
  for (const auto& g : ineqs)
    if (expressible(g)) add_unique(out.inequations, normalize_sign_content(rename(g, to_state), order));
  return out;
}

ParametricOdeSystem make_ode_system(const std::vector<std::string>& indep_names,
                                    const std::vector<std::string>& state_names,
                                    const std::vector<std::vector<RationalExpr>>& odes,
                                    const std::vector<DiffPolynomial>& constraints,
                                    const std::vector<DiffPolynomial>& inequations) {
  ParametricOdeSystem p;
  p.state_signature = Signature{indep_names, state_names};
  p.state_signature.validate();
  p.source_signature = p.state_signature;
  p.source_ranking = Ranking::grlex(p.state_signature);
  for (std::size_t k = 0; k < state_names.size(); ++k) p.sources.push_back(p.state(k));
  if (odes.size() != indep_names.size()) throw Error(ErrorCode::Usage, "one system per independent variable is required");
  for (const auto& sys : odes)
    if (sys.size() != state_names.size()) throw Error(ErrorCode::Usage, "one right-hand side per state is required");
  p.odes = odes;
  p.constraints = constraints;
  p.inequations = inequations;
  return p;
}

RationalExpr flow_derivative(const ParametricOdeSystem& p, const RationalExpr& g, std::size_t i) {
  RationalExpr out = partial_indep(g, static_cast<int>(i));
  for (std::size_t r = 0; r < p.n_states(); ++r) {
    RationalExpr dg = partial(g, p.state(r));
    if (!dg.is_zero()) out += dg * p.odes[i][r];
  }
  return out;
}

CompatibilityReport check_formal_compatibility(const ParametricOdeSystem& p) {
  CompatibilityReport rep;
  TermOrder order = p.state_order();
  std::vector<DiffPolynomial> basis;
  if (!p.constraints.empty()) basis = groebner_basis(p.constraints, order);
  auto reduce_num = [&](const RationalExpr& e) {
    DiffPolynomial r = normal_form(e.num(), basis, order);
    return RationalExpr(r, e.den());
  };
  const std::size_t n = p.n_indep();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < p.n_states(); ++k) {
        ++rep.checks;
        RationalExpr d = flow_derivative(p, p.odes[i][k], j) - flow_derivative(p, p.odes[j][k], i);
        RationalExpr r = reduce_num(d);
        if (!r.is_zero()) rep.residuals.push_back({CompatibilityResidual::Kind::CrossDerivative, i, j, k, r});
      }
    }
  }
  for (std::size_t c = 0; c < p.constraints.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      ++rep.checks;
      RationalExpr r = reduce_num(flow_derivative(p, RationalExpr(p.constraints[c]), i));
      if (!r.is_zero()) rep.residuals.push_back({CompatibilityResidual::Kind::Constraint, i, i, c, r});
    }
  }
  return rep;
}

}  // namespace pde2ode
