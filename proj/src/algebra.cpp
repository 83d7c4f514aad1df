#include "pde2ode/algebra.hpp"

#include "pde2ode/error.hpp"

#include <algorithm>
#include <set>

namespace pde2ode {

TermOrder::TermOrder() : cmp_([](const Derivative& a, const Derivative& b) { return a <=> b; }) {}

TermOrder::TermOrder(DerivativeCompare cmp) : cmp_(std::move(cmp)) {}

std::strong_ordering TermOrder::compare(const Monomial& a, const Monomial& b) const {
  auto desc = [&](const Monomial& m) {
    std::vector<const std::pair<Derivative, int>*> v;
    v.reserve(m.factors.size());
    for (const auto& f : m.factors) v.push_back(&f);
    if (v.size() > 1)
      std::sort(v.begin(), v.end(), [&](auto* x, auto* y) { return cmp_(x->first, y->first) > 0; });
    return v;
  };
  if (!a.factors.empty() || !b.factors.empty()) {
    auto fa = desc(a);
    auto fb = desc(b);
    std::size_t n = std::min(fa.size(), fb.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = cmp_(fa[i]->first, fb[i]->first); c != 0) return c;
      if (fa[i]->second != fb[i]->second) return fa[i]->second <=> fb[i]->second;
    }
    if (fa.size() != fb.size()) return fa.size() <=> fb.size();
  }
  std::size_t n = std::min(a.indep.size(), b.indep.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.indep[i].first != b.indep[i].first) return b.indep[i].first <=> a.indep[i].first;
    if (a.indep[i].second != b.indep[i].second) return a.indep[i].second <=> b.indep[i].second;
  }
  return a.indep.size() <=> b.indep.size();
}

const Monomial& TermOrder::leading_monomial(const DiffPolynomial& p) const {
  if (p.is_zero()) throw Error(ErrorCode::NoDerivative, "leading monomial of zero");
  const Monomial* best = nullptr;
  for (const auto& t : p.terms())
    if (!best || compare(t.first, *best) > 0) best = &t.first;
  return *best;
}

Rational TermOrder::leading_coefficient(const DiffPolynomial& p) const {
  return p.terms().at(leading_monomial(p));
}

std::vector<std::pair<Monomial, Rational>> TermOrder::sorted_terms(const DiffPolynomial& p) const {
  std::vector<std::pair<Monomial, Rational>> v(p.terms().begin(), p.terms().end());
  std::sort(v.begin(), v.end(), [&](const auto& x, const auto& y) { return compare(x.first, y.first) > 0; });
  return v;
}

DiffPolynomial normalize_sign_content(const DiffPolynomial& p, const TermOrder& order) {
  if (p.is_zero()) return p;
  Rational c = p.content();
  if (order.leading_coefficient(p) < 0) c = -c;
  return p * Rational(1 / c);
}

std::optional<DiffPolynomial> exact_divide(const DiffPolynomial& a, const DiffPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivZero, "exact division by zero");
  if (a.is_zero()) return DiffPolynomial{};
  if (b.size() == 1) {
    const auto& [mb, cb] = *b.terms().begin();
    DiffPolynomial q;
    for (const auto& [m, c] : a.terms()) {
      if (!mb.divides(m)) return std::nullopt;
      q.add_term(mb.cofactor_in(m), c / cb);
    }
    return q;
  }
  static const TermOrder natural;
  const Monomial lb = natural.leading_monomial(b);
  const Rational cb = b.terms().at(lb);
  DiffPolynomial r = a;
  DiffPolynomial q;
  while (!r.is_zero()) {
    const Monomial lr = natural.leading_monomial(r);
    if (!lb.divides(lr)) return std::nullopt;
    Monomial t = lb.cofactor_in(lr);
    Rational c = r.terms().at(lr) / cb;
    q.add_term(t, c);
    r -= b.mul_monomial(t, c);
  }
  return q;
}

DiffPolynomial normal_form(const DiffPolynomial& p, const std::vector<DiffPolynomial>& g, const TermOrder& order) {
  if (g.empty() || p.is_zero()) return p;
  std::vector<Monomial> leads;
  std::vector<Rational> lcs;
  leads.reserve(g.size());
  for (const auto& gi : g) {
    leads.push_back(order.leading_monomial(gi));
    lcs.push_back(gi.terms().at(leads.back()));
  }
  DiffPolynomial work = p;
  DiffPolynomial rem;
  while (!work.is_zero()) {
    const Monomial lm = order.leading_monomial(work);
    const Rational lc = work.terms().at(lm);
    bool reduced = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (leads[k].divides(lm)) {
        work -= g[k].mul_monomial(leads[k].cofactor_in(lm), lc / lcs[k]);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.add_term(lm, lc);
      work.add_term(lm, -lc);
    }
  }
  return rem;
}

DiffPolynomial s_polynomial(const DiffPolynomial& f, const DiffPolynomial& g, const TermOrder& order) {
  const Monomial lf = order.leading_monomial(f);
  const Monomial lg = order.leading_monomial(g);
  const Monomial l = lf.lcm(lg);
  return f.mul_monomial(lf.cofactor_in(l), 1 / f.terms().at(lf)) -
         g.mul_monomial(lg.cofactor_in(l), 1 / g.terms().at(lg));
}

std::vector<DiffPolynomial> groebner_basis(std::vector<DiffPolynomial> gens, const TermOrder& order) {
  std::vector<DiffPolynomial> basis;
  for (auto& p : gens)
    if (!p.is_zero()) basis.push_back(normalize_sign_content(p, order));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 1; j < basis.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    if (order.leading_monomial(basis[i]).coprime(order.leading_monomial(basis[j]))) continue;
    DiffPolynomial r = normal_form(s_polynomial(basis[i], basis[j], order), basis, order);
    if (r.is_zero()) continue;
    basis.push_back(normalize_sign_content(r, order));
    for (std::size_t k = 0; k + 1 < basis.size(); ++k) pairs.emplace_back(k, basis.size() - 1);
  }
  // Minimalize then interreduce.
  std::vector<DiffPolynomial> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Monomial li = order.leading_monomial(basis[i]);
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      const Monomial lj = order.leading_monomial(basis[j]);
      if (lj.divides(li) && (!(lj == li) || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  std::vector<DiffPolynomial> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<DiffPolynomial> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    reduced.push_back(normalize_sign_content(normal_form(minimal[i], others, order), order));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const auto& a, const auto& b) {
    return order.compare(order.leading_monomial(a), order.leading_monomial(b)) < 0;
  });
  return reduced;
}

Factored split_factors(const DiffPolynomial& p, const TermOrder& order) {
  if (p.is_zero()) throw Error(ErrorCode::DivZero, "cannot factor zero");
  Factored f;
  f.scale = p.content();
  if (order.leading_coefficient(p) < 0) f.scale = -f.scale;
  Monomial mc = p.monomial_content();
  for (const auto& [d, e] : mc.factors) f.atoms.emplace_back(DiffPolynomial::of(d), e);
  for (const auto& [v, e] : mc.indep) f.atoms.emplace_back(DiffPolynomial::indep_var(v), e);
  DiffPolynomial rest = p.mul_monomial(Monomial{}, 1 / f.scale);
  if (!mc.is_one()) rest = *exact_divide(rest, DiffPolynomial::term(mc, 1));
  if (!rest.is_constant()) f.atoms.emplace_back(rest, 1);
  return f;
}

}  // namespace pde2ode
