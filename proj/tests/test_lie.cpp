#include <doctest.h>

#include "support.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/lie.hpp"

#include <random>

using namespace pde2ode;

namespace {

using Table = std::vector<std::vector<std::vector<Rational>>>;

Table zeros(std::size_t m) { return Table(m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m))); }

struct Eq4 {
  RifForm f = rif(load_system(testsupport::sample("detsys_rif.pde")));
  InitialData id = parametric_derivatives(f);
  VectorFieldSpec vf = VectorFieldSpec::parse("xi:x,eta:y", f.signature);

  StructureConstants at(int x0, int y0, std::vector<std::string> order = {"eta", "xi", "eta_y", "eta_x", "eta_xx"}) {
    StructureOptions opt;
    opt.basis_order = std::move(order);
    return structure_constants(f, id, vf, {Rational(x0), Rational(y0)}, opt);
  }
};

}  // namespace

TEST_CASE("abstract algebras") {
  StructureConstants abelian = StructureConstants::from_values(zeros(2));
  CHECK(derived_algebra_dimension(abelian) == 0);
  CHECK(derived_algebra_is_abelian(abelian));
  CHECK_FALSE(linearizability_verdict(abelian, 3));

  Table affine = zeros(2);
  affine[0][1][1] = 1;
  affine[1][0][1] = -1;
  StructureConstants aff = StructureConstants::from_values(affine);
  CHECK(aff.antisymmetric());
  CHECK(aff.satisfies_jacobi());
  CHECK(derived_algebra_dimension(aff) == 1);

  Table heis = zeros(3);
  heis[0][1][2] = 1;
  heis[1][0][2] = -1;
  StructureConstants h = StructureConstants::from_values(heis);
  CHECK(derived_algebra_dimension(h) == 1);
  CHECK(derived_algebra_is_abelian(h));
  CHECK(linearizability_verdict(h, 1));
  CHECK_FALSE(linearizability_verdict(h, 2));

  Table sl2 = zeros(3);
  auto set = [&](int i, int j, int k, int v) {
    sl2[i][j][k] = v;
    sl2[j][i][k] = -v;
  };
  set(0, 1, 1, 2);
  set(0, 2, 2, -2);
  set(1, 2, 0, 1);
  StructureConstants s = StructureConstants::from_values(sl2);
  CHECK(s.satisfies_jacobi());
  CHECK(derived_algebra_dimension(s) == 3);
  CHECK_FALSE(derived_algebra_is_abelian(s));

  Table broken = zeros(2);
  broken[0][1][0] = 1;
  CHECK_FALSE(StructureConstants::from_values(broken).antisymmetric());
}

TEST_CASE("the symmetry algebra of Eq. (4)") {
  Eq4 e;
  StructureConstants sc = e.at(0, 2);
  REQUIRE(sc.m == 5);
  CHECK(sc.basis_names == std::vector<std::string>{"eta", "xi", "eta_y", "eta_x", "eta_xx"});
  CHECK(sc.values[0][1][4] == Rational(1, 2));
  CHECK(sc.values[1][2][4] == 1);
  CHECK(sc.values[0][2][0] == 1);
  CHECK(sc.values[0][2][2] == Rational(-1, 2));
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(sc.values[3][4][k] == 0);
    for (std::size_t i = 0; i < 5; ++i) CHECK(sc.values[i][i][k] == 0);
  }
  CHECK(sc.antisymmetric());
  CHECK(sc.satisfies_jacobi());
  CHECK(derived_algebra_dimension(sc) == 3);
  CHECK(derived_algebra_is_abelian(sc));
  CHECK(linearizability_verdict(sc, 3));
  CHECK_FALSE(linearizability_verdict(sc, 2));

  Signature ps = sc.point_signature;
  CHECK(ps.indep_names == std::vector<std::string>{"x_0", "y_0"});
  CHECK(sc.symbolic[0][2][2] == testsupport::expr("-1/y_0", ps));
  CHECK(sc.symbolic[1][2][4] == testsupport::expr("y_0/2", ps));

  StructureConstants sc3 = e.at(0, 3);
  for (std::size_t k = 0; k < 5; ++k) CHECK(sc3.values[3][4][k] == 0);
  CHECK(sc3.values[0][2][2] == Rational(-1, 3));
}

TEST_CASE("every basis order yields a Lie algebra") {
  Eq4 e;
  std::vector<std::string> names = {"xi", "eta", "eta_x", "eta_y", "eta_xx"};
  std::mt19937 rng(61);
  for (int t = 0; t < 6; ++t) {
    std::shuffle(names.begin(), names.end(), rng);
    StructureConstants sc = e.at(t - 3, t + 1, names);
    CHECK(sc.antisymmetric());
    CHECK(sc.satisfies_jacobi());
    CHECK(derived_algebra_dimension(sc) == 3);
  }
  StructureOptions def;
  StructureConstants d = structure_constants(e.f, e.id, e.vf, {Rational(0), Rational(2)}, def);
  CHECK(d.basis_names == std::vector<std::string>{"xi", "eta", "eta_x", "eta_y", "eta_xx"});
}

TEST_CASE("invalid requests") {
  Eq4 e;
  try {
    structure_constants(e.f, e.id, e.vf, {Rational(0), Rational(0)});
    FAIL("expected E_PIVOT_AT_POINT");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::PivotAtPoint);
  }
  CHECK_THROWS_AS(VectorFieldSpec::parse("xi:x,xi:y", e.f.signature), Error);
  CHECK_THROWS_AS(VectorFieldSpec::parse("xi:x", e.f.signature), Error);
  CHECK_THROWS_AS(VectorFieldSpec::parse("xi:x,zeta:y", e.f.signature), Error);
  StructureOptions bad;
  bad.basis_order = {"eta", "xi"};
  CHECK_THROWS_AS(structure_constants(e.f, e.id, e.vf, {Rational(0), Rational(2)}, bad), Error);
}

TEST_CASE("points") {
  Signature s{{"x", "y"}, {}};
  CHECK(parse_point("x0=0,y0=2", s) == std::vector<Rational>{0, 2});
  CHECK(parse_point("x_0=1/2, y_0=0.25", s) == std::vector<Rational>{Rational(1, 2), Rational(1, 4)});
  CHECK(parse_point("y=3,x=-1", s) == std::vector<Rational>{-1, 3});
  CHECK_THROWS_AS(parse_point("x0=0", s), Error);
}
