#pragma once

#include "pde2ode/rational.hpp"

#include <compare>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pde2ode {

/// Names of the independent and dependent variables of a system. Every
/// dependent variable is a function of all independent variables.
struct Signature {
  std::vector<std::string> indep_names;
  std::vector<std::string> dep_names;

  std::size_t n_indep() const { return indep_names.size(); }
  std::size_t n_dep() const { return dep_names.size(); }

  /// Index of a name, or -1.
  int find_indep(const std::string& name) const;
  int find_dep(const std::string& name) const;

  /// Throws E_SYNTAX when names collide or no independent variable is declared.
  void validate() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// A partial derivative of dependent variable `dep`; idx[i] counts
/// differentiations with respect to independent variable i.
struct Derivative {
  int dep = 0;
  std::vector<int> idx;

  Derivative() = default;
  Derivative(int dep_, std::vector<int> idx_) : dep(dep_), idx(std::move(idx_)) {}

  /// The function itself (all-zero multi-index).
  static Derivative function(int dep, std::size_t n_indep) {
    return Derivative(dep, std::vector<int>(n_indep, 0));
  }

  int order() const;
  Derivative differentiated(std::size_t i, int times = 1) const;
  /// True when this is obtained from `other` by further differentiation (or equal).
  bool is_derivative_of(const Derivative& other) const;

  friend auto operator<=>(const Derivative&, const Derivative&) = default;
  friend bool operator==(const Derivative&, const Derivative&) = default;
};

/// Product of derivative powers and independent-variable powers.
struct Monomial {
  std::vector<std::pair<Derivative, int>> factors;  // sorted, exponents > 0
  std::vector<std::pair<int, int>> indep;           // sorted by variable index

  bool is_one() const { return factors.empty() && indep.empty(); }
  int degree(const Derivative& d) const;
  int indep_degree(int var) const;
  int total_degree() const;

  bool divides(const Monomial& other) const;
  /// other / this; requires divides(other).
  Monomial cofactor_in(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  Monomial gcd(const Monomial& other) const;
  bool coprime(const Monomial& other) const { return gcd(other).is_one(); }

  static Monomial of(const Derivative& d, int exp = 1);
  static Monomial of_indep(int var, int exp = 1);

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Polynomial with rational coefficients in derivatives and independent
/// variables. Zero coefficients are never stored.
class DiffPolynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  DiffPolynomial() = default;
  DiffPolynomial(const Rational& c);  // NOLINT: constants convert implicitly
  DiffPolynomial(int c) : DiffPolynomial(Rational(c)) {}

  static DiffPolynomial of(const Derivative& d);
  static DiffPolynomial indep_var(int var);
  static DiffPolynomial term(const Monomial& m, const Rational& c);

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the monomial 1.
  Rational constant_term() const;
  bool has_derivatives() const;

  std::set<Derivative> derivatives() const;
  std::set<int> indep_vars() const;
  /// Highest derivative order present, -1 when there is none.
  int max_order() const;
  int degree(const Derivative& d) const;
  int total_degree() const;

  /// Coefficients c_k with p = sum_k c_k * d^k (length degree(d)+1).
  std::vector<DiffPolynomial> coefficients(const Derivative& d) const;

  /// Positive gcd of the coefficients (zero for the zero polynomial).
  Rational content() const;
  /// Monomial gcd of all terms.
  Monomial monomial_content() const;

  void add_term(const Monomial& m, const Rational& c);

  DiffPolynomial& operator+=(const DiffPolynomial& o);
  DiffPolynomial& operator-=(const DiffPolynomial& o);
  DiffPolynomial& operator*=(const Rational& c);
  DiffPolynomial operator-() const;

  friend DiffPolynomial operator+(DiffPolynomial a, const DiffPolynomial& b) { return a += b; }
  friend DiffPolynomial operator-(DiffPolynomial a, const DiffPolynomial& b) { return a -= b; }
  friend DiffPolynomial operator*(const DiffPolynomial& a, const DiffPolynomial& b);
  friend DiffPolynomial operator*(DiffPolynomial a, const Rational& c) { return a *= c; }
  friend DiffPolynomial operator*(const Rational& c, DiffPolynomial a) { return a *= c; }
  DiffPolynomial mul_monomial(const Monomial& m, const Rational& c) const;

  friend bool operator==(const DiffPolynomial& a, const DiffPolynomial& b);
  /// Total order on polynomials (structural), for use as a container key.
  friend bool operator<(const DiffPolynomial& a, const DiffPolynomial& b);

 private:
  Terms terms_;
};

DiffPolynomial pow(const DiffPolynomial& p, int e);

/// Total derivative D_i: the chain rule through every derivative, plus the
/// explicit dependence on independent variable i.
DiffPolynomial total_derivative(const DiffPolynomial& p, std::size_t i);

/// Ordinary partial derivatives treating every factor as an indeterminate.
DiffPolynomial partial(const DiffPolynomial& p, const Derivative& d);
DiffPolynomial partial_indep(const DiffPolynomial& p, int var);

/// Rebuild p after mapping every derivative through `f`.
DiffPolynomial rename(const DiffPolynomial& p, const std::function<Derivative(const Derivative&)>& f);

/// p(d) with d replaced by q.
DiffPolynomial substitute(const DiffPolynomial& p, const Derivative& d, const DiffPolynomial& q);

/// Quotient of two differential polynomials; den is never zero.
class RationalExpr {
 public:
  RationalExpr() : num_(0), den_(1) {}
  RationalExpr(const DiffPolynomial& num);  // NOLINT
  RationalExpr(const Rational& c) : RationalExpr(DiffPolynomial(c)) {}  // NOLINT
  RationalExpr(int c) : RationalExpr(DiffPolynomial(c)) {}  // NOLINT
  /// Throws E_DIV_ZERO for a zero denominator. Normalizes.
  RationalExpr(DiffPolynomial num, DiffPolynomial den);

  const DiffPolynomial& num() const { return num_; }
  const DiffPolynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  RationalExpr& operator+=(const RationalExpr& o);
  RationalExpr& operator-=(const RationalExpr& o);
  RationalExpr& operator*=(const RationalExpr& o);
  RationalExpr& operator/=(const RationalExpr& o);
  RationalExpr operator-() const;

  friend RationalExpr operator+(RationalExpr a, const RationalExpr& b) { return a += b; }
  friend RationalExpr operator-(RationalExpr a, const RationalExpr& b) { return a -= b; }
  friend RationalExpr operator*(RationalExpr a, const RationalExpr& b) { return a *= b; }
  friend RationalExpr operator/(RationalExpr a, const RationalExpr& b) { return a /= b; }

  /// Mathematical equality of the two quotients (cross multiplication).
  friend bool operator==(const RationalExpr& a, const RationalExpr& b);

 private:
  void normalize();

  DiffPolynomial num_;
  DiffPolynomial den_;
};

RationalExpr total_derivative(const RationalExpr& e, std::size_t i);
RationalExpr partial(const RationalExpr& e, const Derivative& d);
RationalExpr partial_indep(const RationalExpr& e, int var);

/// Replace derivatives and independent variables by rational expressions.
/// Unlisted symbols are kept.
RationalExpr substitute(const RationalExpr& e, const std::map<Derivative, RationalExpr>& derivs,
                        const std::map<int, RationalExpr>& indeps = {});

/// Floating-point evaluation of a polynomial for any field-like scalar type.
template <class T, class DerivValue, class IndepValue>
T evaluate_poly(const DiffPolynomial& p, DerivValue&& deriv_value, IndepValue&& indep_value) {
  T total(0);
  for (const auto& [m, c] : p.terms()) {
    T t(c.get_d());
    for (const auto& [d, e] : m.factors) {
      T v = deriv_value(d);
      for (int k = 0; k < e; ++k) t *= v;
    }
    for (const auto& [var, e] : m.indep) {
      T v = indep_value(var);
      for (int k = 0; k < e; ++k) t *= v;
    }
    total += t;
  }
  return total;
}

/// num/den at a point. Throws E_UNKNOWN_SYMBOL for an unbound derivative and
/// E_DIV_ZERO when |den| <= 1e-12.
double evaluate(const RationalExpr& e, const std::map<Derivative, double>& point,
                std::span<const double> indep);

/// Same, with independent variables bound by name.
double evaluate(const RationalExpr& e, const std::map<Derivative, double>& point,
                const Signature& sig, const std::map<std::string, double>& indep);

/// Exact evaluation; every symbol occurring must be bound.
Rational evaluate_exact(const DiffPolynomial& p, const std::map<Derivative, Rational>& point,
                        std::span<const Rational> indep);

}  // namespace pde2ode
