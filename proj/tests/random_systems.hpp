#pragma once

// Random zero-dimensional polynomial systems with constant rational
// coefficients: for every variable one polynomial whose top-degree part is a
// pure power, plus an optional extra polynomial.

#include "oracles.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

struct RandomSystem {
  std::size_t n = 0;
  std::vector<oracle::Poly> polys;
  std::string text;
};

inline oracle::Exponent random_exponent(std::mt19937& rng, std::size_t n, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, n - 1);
  oracle::Exponent e(n, 0);
  int d = deg(rng);
  for (int k = 0; k < d; ++k) ++e[var(rng)];
  return e;
}

inline mpq_class random_coefficient(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-5, 5);
  int v = 0;
  while (v == 0) v = c(rng);
  return mpq_class(v);
}

inline RandomSystem random_zero_dim_system(std::mt19937& rng) {
  static const char* names[] = {"x", "y", "z"};
  RandomSystem s;
  s.n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  std::uniform_int_distribution<int> top(1, 3);
  std::uniform_int_distribution<int> extra_terms(0, 3);
  for (std::size_t i = 0; i < s.n; ++i) {
    oracle::Poly p;
    int d = top(rng);
    oracle::Exponent e(s.n, 0);
    e[i] = d;
    p[e] = random_coefficient(rng);
    for (int k = extra_terms(rng); k > 0; --k) {
      oracle::Exponent low = random_exponent(rng, s.n, d - 1);
      p[low] += random_coefficient(rng);
      if (p[low] == 0) p.erase(low);
    }
    s.polys.push_back(p);
  }
  if (std::bernoulli_distribution(0.5)(rng)) {
    oracle::Poly p;
    for (int k = 1 + extra_terms(rng); k > 0; --k) {
      oracle::Exponent e = random_exponent(rng, s.n, 3);
      p[e] += random_coefficient(rng);
      if (p[e] == 0) p.erase(e);
    }
    if (!p.empty()) s.polys.push_back(p);
  }

  std::ostringstream os;
  os << "vars ";
  for (std::size_t i = 0; i < s.n; ++i) os << (i ? ", " : "") << names[i];
  os << ";\n";
  for (const auto& p : s.polys) {
    os << "eq 0";
    for (const auto& [e, c] : p) {
      os << " + (" << c.get_str() << ")";
      for (std::size_t i = 0; i < s.n; ++i)
        if (e[i] > 0) os << "*" << names[i] << "^" << e[i];
    }
    os << ";\n";
  }
  s.text = os.str();
  return s;
}

}  // namespace testsupport
