#pragma once

// Commutative algebra on differential polynomials: each derivative and each
// independent variable is treated as a plain indeterminate.

#include "pde2ode/diffpoly.hpp"

#include <compare>
#include <functional>
#include <optional>
#include <vector>

namespace pde2ode {

using DerivativeCompare = std::function<std::strong_ordering(const Derivative&, const Derivative&)>;

/// Lexicographic term order: derivatives ordered by the supplied comparison
/// (largest first), then independent variables with index 0 largest. All
/// derivatives are larger than all independent variables.
class TermOrder {
 public:
  TermOrder();  // natural order on Derivative
  explicit TermOrder(DerivativeCompare cmp);

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const;
  std::strong_ordering compare(const Derivative& a, const Derivative& b) const { return cmp_(a, b); }

  /// Largest monomial of a nonzero polynomial.
  const Monomial& leading_monomial(const DiffPolynomial& p) const;
  Rational leading_coefficient(const DiffPolynomial& p) const;

  /// Terms of p, largest first.
  std::vector<std::pair<Monomial, Rational>> sorted_terms(const DiffPolynomial& p) const;

 private:
  DerivativeCompare cmp_;
};

/// Divide by content and fix the sign so the leading coefficient is positive.
DiffPolynomial normalize_sign_content(const DiffPolynomial& p, const TermOrder& order);

/// Exact division; nullopt when b does not divide a.
std::optional<DiffPolynomial> exact_divide(const DiffPolynomial& a, const DiffPolynomial& b);

/// Remainder of full multivariate division of p by the set g.
DiffPolynomial normal_form(const DiffPolynomial& p, const std::vector<DiffPolynomial>& g,
                           const TermOrder& order);

DiffPolynomial s_polynomial(const DiffPolynomial& f, const DiffPolynomial& g, const TermOrder& order);

/// Reduced Groebner basis (Buchberger with the coprime criterion), elements
/// normalized by normalize_sign_content and sorted by leading monomial.
std::vector<DiffPolynomial> groebner_basis(std::vector<DiffPolynomial> gens, const TermOrder& order);

/// Splits p = scale * prod(atoms_i ^ exps_i) where the atoms are single
/// variables from the monomial content plus the remaining primitive cofactor
/// (normalized under `order`). Used for pivots and denominators.
struct Factored {
  Rational scale;
  std::vector<std::pair<DiffPolynomial, int>> atoms;
};
Factored split_factors(const DiffPolynomial& p, const TermOrder& order);

}  // namespace pde2ode
