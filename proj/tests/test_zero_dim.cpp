#include <doctest.h>

#include "oracles.hpp"
#include "random_systems.hpp"
#include "support.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/initial_data.hpp"
#include "pde2ode/linalg.hpp"
#include "pde2ode/zero_dim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace pde2ode;
using testsupport::poly;

namespace {

UPoly upoly(std::initializer_list<int> c) {
  std::vector<Rational> v;
  for (int x : c) v.emplace_back(x);
  return UPoly(v);
}

RationalMatrix matrix(std::initializer_list<std::initializer_list<int>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (int v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

}  // namespace

TEST_CASE("exact matrix algebra") {
  RationalMatrix a = matrix({{1, 2}, {2, 4}});
  CHECK(rank(a) == 1);
  RationalMatrix n = nullspace(a);
  REQUIRE(n.cols() == 1);
  CHECK((a * n).is_zero());
  CHECK(trace(matrix({{1, 5}, {7, -3}})) == -2);
  CHECK(characteristic_polynomial(matrix({{2, 1}, {0, 3}})) == upoly({6, -5, 1}));
  CHECK(evaluate(upoly({6, -5, 1}), matrix({{2, 1}, {0, 3}})).is_zero());
  CHECK(RationalMatrix::identity(3).transposed() == RationalMatrix::identity(3));
}

TEST_CASE("univariate polynomials") {
  UPoly p = upoly({-1, 1}) * upoly({-1, 1}) * upoly({2, 1});
  auto [q, r] = divmod(p, upoly({-1, 1}));
  CHECK(r.is_zero());
  CHECK(q == upoly({-1, 1}) * upoly({2, 1}));
  CHECK(gcd(p, p.derivative()) == upoly({-1, 1}));
  auto sq = squarefree_decomposition(p);
  REQUIRE(sq.size() == 2);
  CHECK(sq[0] == upoly({2, 1}));
  CHECK(sq[1] == upoly({-1, 1}));
  auto z = roots(upoly({1, 0, 1}) * upoly({-3, 1}));
  REQUIRE(z.size() == 3);
  std::sort(z.begin(), z.end(), [](auto a, auto b) { return a.imag() < b.imag(); });
  CHECK(std::abs(z[0] - std::complex<double>(0, -1)) < 1e-14);
  CHECK(std::abs(z[1] - std::complex<double>(3, 0)) < 1e-14);
  CHECK(std::abs(z[2] - std::complex<double>(0, 1)) < 1e-14);
}

TEST_CASE("polynomials to differential equations") {
  SystemSource ms = load_system(testsupport::sample("ms27.pde"));
  SystemSource d = poly_to_diff(ms);
  const Signature& s = d.signature;
  CHECK(s.dep_names == std::vector<std::string>{"u"});
  REQUIRE(d.equations.size() == 3);
  CHECK(d.equations[0] == poly("diff(u,x,x,x) - diff(u,y,z)", s));
  CHECK(d.equations[1] == poly("diff(u,y,y,y) - diff(u,x,z)", s));
  CHECK(d.equations[2] == poly("diff(u,z,z,z) - diff(u,x,y)", s));

  SystemSource lin = poly_to_diff(parse_system("vars x;\neq x - 1;\n"));
  CHECK(lin.equations[0] == poly("diff(u,x) - u", lin.signature));

  SystemSource unit = poly_to_diff(parse_system("vars x;\neq 1;\n"));
  CHECK(unit.equations[0] == poly("u", unit.signature));
  RifForm f = rif(unit);
  CHECK(parametric_derivatives(f).dimension() == 0);
}

TEST_CASE("multiplication matrices of small systems") {
  MultiplicationSystem sq = multiplication_system_for(parse_system("vars x;\neq x^2;\n"));
  REQUIRE(sq.dimension() == 2);
  CHECK(sq.basis_names == std::vector<std::string>{"u", "u_x"});
  CHECK(sq.matrices[0] == matrix({{0, 1}, {0, 0}}));

  MultiplicationSystem one = multiplication_system_for(parse_system("vars x;\neq x - 1;\n"));
  REQUIRE(one.dimension() == 1);
  CHECK(one.matrices[0] == matrix({{1}}));

  Signature s{{"x"}, {"u"}};
  ParametricOdeSystem nonlinear = make_ode_system({"x"}, {"u"}, {{testsupport::expr("u^2", s)}});
  CHECK_THROWS_AS(build_multiplication_matrices(nonlinear), Error);
  ParametricOdeSystem varying = make_ode_system({"x"}, {"u"}, {{testsupport::expr("x*u", s)}});
  try {
    build_multiplication_matrices(varying);
    FAIL("expected E_NOT_LINEAR");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotLinear);
  }
  Signature s2{{"x", "y"}, {"a", "b"}};
  ParametricOdeSystem noncommuting = make_ode_system(
      {"x", "y"}, {"a", "b"},
      {{testsupport::expr("b", s2), testsupport::expr("0", s2)}, {testsupport::expr("a", s2), testsupport::expr("0", s2)}});
  try {
    build_multiplication_matrices(noncommuting);
    FAIL("expected E_NOT_COMMUTING");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCommuting);
  }
}

TEST_CASE("roots of small systems") {
  SystemSource nil = load_system(testsupport::sample("nilpotent.pde"));
  RootSet r1 = solve_zero_dim(multiplication_system_for(nil), nil);
  REQUIRE(r1.roots.size() == 1);
  CHECK(r1.roots[0].multiplicity == 2);
  CHECK(std::abs(r1.roots[0].coords[0]) < 1e-12);
  CHECK(r1.roots[0].residual < 1e-8);

  SystemSource pt = parse_system("vars x, y;\neq x - 1;\neq y - 2;\n");
  RootSet r2 = solve_zero_dim(multiplication_system_for(pt), pt);
  REQUIRE(r2.roots.size() == 1);
  CHECK(std::abs(r2.roots[0].coords[0] - 1.0) < 1e-12);
  CHECK(std::abs(r2.roots[0].coords[1] - 2.0) < 1e-12);
  CHECK(r2.roots[0].residual < 1e-12);

  SystemSource circle = parse_system("vars x, y;\neq x^2 + y^2 - 5;\neq x*y - 2;\n");
  RootSet r3 = solve_zero_dim(multiplication_system_for(circle), circle);
  CHECK(r3.roots.size() == 4);
  for (const auto& r : r3.roots) {
    CHECK(r.residual < 1e-10);
    CHECK(std::abs(r.coords[0] * r.coords[1] - 2.0) < 1e-10);
  }
}

TEST_CASE("the 27-point system") {
  SystemSource src = load_system(testsupport::sample("ms27.pde"));
  MultiplicationSystem ms = multiplication_system_for(src);
  REQUIRE(ms.dimension() == 27);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(ms.matrices[i] * ms.matrices[j] == ms.matrices[j] * ms.matrices[i]);

  RootSet rs = solve_zero_dim(ms, src);
  CHECK(rs.roots.size() == 17);
  auto oracle_roots = oracle::ms27_nonzero_roots();
  CHECK(oracle_roots.size() == 16);
  int total = 0;
  for (const auto& r : rs.roots) {
    total += r.multiplicity;
    CHECK(r.residual < 1e-8);
    bool origin = std::abs(r.coords[0]) + std::abs(r.coords[1]) + std::abs(r.coords[2]) < 1e-8;
    if (origin) {
      CHECK(r.multiplicity == 11);
      continue;
    }
    bool found = std::any_of(oracle_roots.begin(), oracle_roots.end(), [&](const auto& o) {
      for (std::size_t c = 0; c < 3; ++c)
        if (std::abs(r.coords[c] - o[c]) >= 1e-8) return false;
      return true;
    });
    CHECK(found);
  }
  CHECK(total == 27);

  for (std::size_t i = 0; i < 3; ++i) {
    std::complex<double> sum = 0;
    for (const auto& r : rs.roots) sum += double(r.multiplicity) * r.coords[i];
    CHECK(std::abs(sum - trace(ms.matrices[i]).get_d()) < 1e-6);
  }
}

TEST_CASE("trace property and determinism on random systems") {
  std::mt19937 rng(51);
  for (int t = 0; t < 10; ++t) {
    testsupport::RandomSystem sys = testsupport::random_zero_dim_system(rng);
    SystemSource src = parse_system(sys.text);
    MultiplicationSystem ms = multiplication_system_for(src, 8);
    CHECK(static_cast<long>(ms.dimension()) == oracle::standard_monomial_count(sys.polys, sys.n));
    if (ms.dimension() == 0) continue;
    RootSet a = solve_zero_dim(ms, src);
    RootSet b = solve_zero_dim(ms, src);
    REQUIRE(a.roots.size() == b.roots.size());
    int total = 0;
    for (std::size_t k = 0; k < a.roots.size(); ++k) {
      total += a.roots[k].multiplicity;
      CHECK(a.roots[k].coords == b.roots[k].coords);
    }
    CHECK(total == static_cast<int>(ms.dimension()));
    for (std::size_t i = 0; i < sys.n; ++i) {
      std::complex<double> sum = 0;
      for (const auto& r : a.roots) sum += double(r.multiplicity) * r.coords[i];
      CHECK(std::abs(sum - trace(ms.matrices[i]).get_d()) < 1e-6);
    }
  }
}
