#pragma once

#include "pde2ode/diffpoly.hpp"

#include <random>

namespace testsupport {

struct DiffPolyShape {
  std::size_t n_indep = 2;
  std::size_t n_dep = 2;
  int max_order = 2;
  int max_terms = 4;
  int max_factors = 3;
  bool with_indep = true;
};

inline pde2ode::Derivative random_derivative(std::mt19937& rng, const DiffPolyShape& s) {
  std::uniform_int_distribution<int> dep(0, static_cast<int>(s.n_dep) - 1);
  std::uniform_int_distribution<int> ord(0, s.max_order);
  std::uniform_int_distribution<std::size_t> var(0, s.n_indep - 1);
  pde2ode::Derivative d = pde2ode::Derivative::function(dep(rng), s.n_indep);
  for (int k = ord(rng); k > 0; --k) d = d.differentiated(var(rng));
  return d;
}

inline pde2ode::DiffPolynomial random_diffpoly(std::mt19937& rng, const DiffPolyShape& s) {
  std::uniform_int_distribution<int> terms(1, s.max_terms);
  std::uniform_int_distribution<int> factors(0, s.max_factors);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> indep_exp(0, 2);
  std::uniform_int_distribution<int> var(0, static_cast<int>(s.n_indep) - 1);
  pde2ode::DiffPolynomial p;
  for (int t = terms(rng); t > 0; --t) {
    pde2ode::DiffPolynomial term(pde2ode::Rational(num(rng)) / pde2ode::Rational(den(rng)));
    for (int f = factors(rng); f > 0; --f) term = term * pde2ode::DiffPolynomial::of(random_derivative(rng, s));
    if (s.with_indep) {
      for (int e = indep_exp(rng); e > 0; --e) term = term * pde2ode::DiffPolynomial::indep_var(var(rng));
    }
    p += term;
  }
  return p;
}

}  // namespace testsupport
