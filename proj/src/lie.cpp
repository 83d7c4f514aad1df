#include "pde2ode/lie.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pde2ode {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

VectorFieldSpec VectorFieldSpec::parse(const std::string& text, const Signature& sig) {
  VectorFieldSpec vf;
  vf.dep_for_slot.assign(sig.n_indep(), -1);
  std::vector<bool> used(sig.n_dep(), false);
  for (const auto& item : split(text, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::Usage, "expected dep:var in '" + item + "'");
    int dep = sig.find_dep(trim(item.substr(0, colon)));
    int var = sig.find_indep(trim(item.substr(colon + 1)));
    if (dep < 0 || var < 0) throw Error(ErrorCode::Usage, "unknown name in '" + item + "'");
    if (used[static_cast<std::size_t>(dep)] || vf.dep_for_slot[static_cast<std::size_t>(var)] >= 0)
      throw Error(ErrorCode::Usage, "'" + item + "' assigns a name twice");
    used[static_cast<std::size_t>(dep)] = true;
    vf.dep_for_slot[static_cast<std::size_t>(var)] = dep;
  }
  if (sig.n_dep() != sig.n_indep() || std::find(used.begin(), used.end(), false) != used.end())
    throw Error(ErrorCode::Usage, "every dependent variable must be assigned to exactly one variable");
  return vf;
}

std::vector<Rational> parse_point(const std::string& text, const Signature& sig) {
  std::vector<std::optional<Rational>> vals(sig.n_indep());
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Usage, "expected name=value in '" + item + "'");
    std::string name = trim(item.substr(0, eq));
    int var = sig.find_indep(name);
    for (std::size_t i = 0; i < sig.n_indep() && var < 0; ++i)
      if (name == sig.indep_names[i] + "0" || name == sig.indep_names[i] + "_0") var = static_cast<int>(i);
    if (var < 0) throw Error(ErrorCode::Usage, "unknown point coordinate '" + name + "'");
    try {
      vals[static_cast<std::size_t>(var)] = parse_rational(trim(item.substr(eq + 1)));
    } catch (const Error&) {
      throw Error(ErrorCode::Usage, "bad value in '" + item + "'");
    }
  }
  std::vector<Rational> out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!vals[i]) throw Error(ErrorCode::Usage, "missing coordinate for " + sig.indep_names[i]);
    out.push_back(*vals[i]);
  }
  return out;
}

StructureConstants StructureConstants::from_values(std::vector<std::vector<std::vector<Rational>>> c) {
  StructureConstants sc;
  sc.m = c.size();
  for (std::size_t k = 1; k <= sc.m; ++k) sc.basis_names.push_back("X_" + std::to_string(k));
  sc.values = std::move(c);
  return sc;
}

bool StructureConstants::antisymmetric() const {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (values[i][j][k] != -values[j][i][k]) return false;
  return true;
}

bool StructureConstants::satisfies_jacobi() const {
  // sum over cyclic (i,j,k) of [[X_i,X_j],X_k] = sum_l c_ij^l c_lk^r
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t r = 0; r < m; ++r) {
          Rational total = 0;
          for (std::size_t l = 0; l < m; ++l)
            total += values[i][j][l] * values[l][k][r] + values[j][k][l] * values[l][i][r] +
                     values[k][i][l] * values[l][j][r];
          if (total != 0) return false;
        }
  return true;
}

namespace {

/// Two copies of the unknowns: A (deps 0..p-1) and B (deps p..2p-1), with
/// the solved form duplicated for each copy.
RifForm doubled_form(const RifForm& f) {
  const int p = static_cast<int>(f.signature.n_dep());
  RifForm out;
  out.signature.indep_names = f.signature.indep_names;
  for (const char* prefix : {"A_", "B_"})
    for (const auto& n : f.signature.dep_names) out.signature.dep_names.push_back(prefix + n);
  std::vector<int> dep_order = f.ranking.dep_order();
  for (int d : f.ranking.dep_order()) dep_order.push_back(d + p);
  out.ranking = Ranking(f.ranking.indep_order(), dep_order);
  for (int copy = 0; copy < 2; ++copy) {
    auto shift = [&](const Derivative& d) { return Derivative(d.dep + copy * p, d.idx); };
    for (const auto& r : f.rules)
      out.rules.push_back({shift(r.lead),
                           RationalExpr(rename(r.rhs.num(), shift), rename(r.rhs.den(), shift)),
                           rename(r.pivot, shift)});
    for (const auto& c : f.constraints) out.constraints.push_back(rename(c, shift));
    for (const auto& g : f.inequations) out.inequations.push_back(rename(g, shift));
  }
  out.status = f.status;
  return out;
}

}  // namespace

StructureConstants structure_constants(const RifForm& f, const InitialData& id, const VectorFieldSpec& vf,
                                       const std::vector<Rational>& point, const StructureOptions& opt) {
  const Signature& sig = f.signature;
  const std::size_t n = sig.n_indep();
  const int p = static_cast<int>(sig.n_dep());
  if (vf.dep_for_slot.size() != n) throw Error(ErrorCode::Usage, "vector field assignment does not match the variables");
  if (point.size() != n) throw Error(ErrorCode::Usage, "point has the wrong number of coordinates");

  for (const auto& g : f.inequations) {
    if (g.has_derivatives()) continue;
    if (evaluate_exact(g, {}, point) == 0)
      throw Error(ErrorCode::PivotAtPoint, "inequation " + render(g, sig) + " vanishes at the point");
  }

  std::vector<Derivative> basis = id.parametric;
  if (!opt.basis_order.empty()) {
    if (opt.basis_order.size() != basis.size())
      throw Error(ErrorCode::Usage, "basis order must list all " + std::to_string(basis.size()) + " parametric derivatives");
    std::vector<Derivative> ordered;
    for (const auto& name : opt.basis_order) {
      auto it = std::find_if(basis.begin(), basis.end(),
                             [&](const Derivative& d) { return compact_name(d, sig) == name; });
      if (it == basis.end()) throw Error(ErrorCode::Usage, "'" + name + "' is not a parametric derivative");
      if (std::find(ordered.begin(), ordered.end(), *it) != ordered.end())
        throw Error(ErrorCode::Usage, "'" + name + "' is listed twice");
      ordered.push_back(*it);
    }
    basis = ordered;
  }
  const std::size_t m = basis.size();

  StructureConstants sc;
  sc.m = m;
  for (const auto& d : basis) sc.basis_names.push_back(compact_name(d, sig));
  for (const auto& name : sig.indep_names) sc.point_signature.indep_names.push_back(name + "_0");
  sc.point = point;

  RifForm twin = doubled_form(f);
  Reducer red(twin);
  std::vector<int> slot_of_dep(static_cast<std::size_t>(p), -1);
  for (std::size_t l = 0; l < n; ++l) slot_of_dep.at(static_cast<std::size_t>(vf.dep_for_slot[l])) = static_cast<int>(l);

  auto a_of = [&](const Derivative& d) { return Derivative(d.dep, d.idx); };
  auto b_of = [&](const Derivative& d) { return Derivative(d.dep + p, d.idx); };

  // Reduced parametric derivative vector of the commutator field.
  std::vector<RationalExpr> bracket;
  for (const auto& theta : basis) {
    const int q = theta.dep;
    DiffPolynomial comp;
    for (std::size_t l = 0; l < n; ++l) {
      Derivative al = a_of(Derivative::function(vf.dep_for_slot[l], n));
      Derivative bl = b_of(Derivative::function(vf.dep_for_slot[l], n));
      Derivative aq = a_of(Derivative::function(q, n)).differentiated(l);
      Derivative bq = b_of(Derivative::function(q, n)).differentiated(l);
      comp += DiffPolynomial::of(al) * DiffPolynomial::of(bq) - DiffPolynomial::of(bl) * DiffPolynomial::of(aq);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < theta.idx[i]; ++k) comp = total_derivative(comp, i);
    bracket.push_back(red.reduce(comp));
  }

  std::map<Derivative, bool> parametric;
  for (const auto& d : basis) {
    parametric[a_of(d)] = true;
    parametric[b_of(d)] = true;
  }
  for (const auto& e : bracket)
    for (const auto* poly : {&e.num(), &e.den()})
      for (const auto& d : poly->derivatives())
        if (!parametric.count(d))
          throw Error(ErrorCode::NotClosed, "bracket involves the non-parametric derivative " + render(d, twin.signature));

  std::map<int, RationalExpr> at_point;
  for (std::size_t i = 0; i < n; ++i) at_point.emplace(static_cast<int>(i), RationalExpr(point[i]));

  sc.symbolic.assign(m, std::vector<std::vector<RationalExpr>>(m));
  sc.values.assign(m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::map<Derivative, RationalExpr> data;
      for (std::size_t r = 0; r < m; ++r) {
        data[a_of(basis[r])] = RationalExpr(r == i ? 1 : 0);
        data[b_of(basis[r])] = RationalExpr(r == j ? 1 : 0);
      }
      for (std::size_t k = 0; k < m; ++k) {
        RationalExpr c = substitute(bracket[k], data);
        sc.symbolic[i][j].push_back(c);
        RationalExpr v;
        try {
          v = substitute(c, {}, at_point);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::DivZero)
            throw Error(ErrorCode::PivotAtPoint, "a pivot of the bracket vanishes at the point");
          throw;
        }
        sc.values[i][j][k] = v.num().constant_term() / v.den().constant_term();
      }
    }
  }
  return sc;
}

namespace {

/// Rows spanning the bracket vectors, in reduced echelon form.
std::vector<std::vector<Rational>> derived_basis(const StructureConstants& sc) {
  const std::size_t m = sc.m;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) rows.push_back(sc.values[i][j]);
  RationalMatrix a(rows.size(), m);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < m; ++k) a(r, k) = rows[r][k];
  // Row space via the null space of the null space.
  RationalMatrix kernel = nullspace(a);
  RationalMatrix span = nullspace(kernel.transposed());
  std::vector<std::vector<Rational>> out;
  for (std::size_t c = 0; c < span.cols(); ++c) {
    std::vector<Rational> v(m);
    for (std::size_t k = 0; k < m; ++k) v[k] = span(k, c);
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::size_t derived_algebra_dimension(const StructureConstants& sc) { return derived_basis(sc).size(); }

bool derived_algebra_is_abelian(const StructureConstants& sc) {
  auto basis = derived_basis(sc);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b)
      for (std::size_t k = 0; k < sc.m; ++k) {
        Rational total = 0;
        for (std::size_t i = 0; i < sc.m; ++i)
          for (std::size_t j = 0; j < sc.m; ++j)
            if (basis[a][i] != 0 && basis[b][j] != 0) total += basis[a][i] * basis[b][j] * sc.values[i][j][k];
        if (total != 0) return false;
      }
  return true;
}

bool linearizability_verdict(const StructureConstants& sc, int ode_order) {
  return ode_order >= 0 && derived_algebra_dimension(sc) == static_cast<std::size_t>(ode_order) &&
         derived_algebra_is_abelian(sc);
}

}  // namespace pde2ode
