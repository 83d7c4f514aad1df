#pragma once

// Exact linear algebra over the rationals and univariate polynomials.

#include "pde2ode/rational.hpp"

#include <complex>
#include <vector>

namespace pde2ode {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  RationalMatrix transposed() const;

  RationalMatrix& operator+=(const RationalMatrix& o);
  RationalMatrix& operator-=(const RationalMatrix& o);
  RationalMatrix& operator*=(const Rational& c);
  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix& b) { return a -= b; }
  friend RationalMatrix operator*(RationalMatrix a, const Rational& c) { return a *= c; }
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::size_t rank(RationalMatrix a);

/// Columns spanning the right null space.
RationalMatrix nullspace(const RationalMatrix& a);

Rational trace(const RationalMatrix& a);

/// Dense univariate polynomial over Q, c[k] multiplying t^k, no trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);

  const std::vector<Rational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rational& leading() const { return c_.back(); }

  UPoly monic() const;
  UPoly derivative() const;

  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly&, const UPoly&) = default;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Quotient and remainder of polynomial division.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
/// Monic greatest common divisor.
UPoly gcd(UPoly a, UPoly b);

/// p = prod_k s_k^k with squarefree, pairwise coprime monic s_k; result[k-1] = s_k.
std::vector<UPoly> squarefree_decomposition(const UPoly& p);

/// Characteristic polynomial det(t I - A), computed exactly.
UPoly characteristic_polynomial(const RationalMatrix& a);

/// p(A) by Horner's rule.
RationalMatrix evaluate(const UPoly& p, const RationalMatrix& a);

/// All complex roots of p with multiplicity one each (p squarefree),
/// refined by Newton steps on the exact coefficients.
std::vector<std::complex<double>> roots(const UPoly& p);

}  // namespace pde2ode
