#pragma once

#include "pde2ode/elimination.hpp"
#include "pde2ode/parser.hpp"

#include <chrono>
#include <filesystem>
#include <string>

namespace testsupport {

inline std::filesystem::path sample(const std::string& name) {
  return std::filesystem::path(PDE2ODE_SAMPLES_DIR) / name;
}

inline pde2ode::RationalExpr expr(const std::string& text, const pde2ode::Signature& sig) {
  return pde2ode::parse_expression(text, sig);
}

inline pde2ode::DiffPolynomial poly(const std::string& text, const pde2ode::Signature& sig) {
  auto e = pde2ode::parse_expression(text, sig);
  return e.num() * pde2ode::DiffPolynomial(pde2ode::Rational(1) / e.den().constant_term());
}

inline pde2ode::Derivative deriv(const std::string& text, const pde2ode::Signature& sig) {
  auto p = poly(text, sig);
  return p.terms().begin()->first.factors.front().first;
}

/// a and b differ by a nonzero rational factor.
inline bool proportional(const pde2ode::DiffPolynomial& a, const pde2ode::DiffPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (a.size() != b.size()) return false;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  pde2ode::Rational ratio = ia->second / ib->second;
  for (; ia != a.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first) || ia->second != ratio * ib->second) return false;
  }
  return true;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace testsupport
