#include <doctest.h>

#include "support.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/ode_reduce.hpp"
#include "pde2ode/zero_dim.hpp"

using namespace pde2ode;
using testsupport::expr;
using testsupport::poly;

namespace {

ParametricOdeSystem ode_of(const char* name) {
  return reduce_to_parametric_ode(rif(load_system(testsupport::sample(name))));
}

void check_system(const std::vector<RationalExpr>& got, const std::vector<std::string>& want, const Signature& s) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(got[k] == expr(want[k], s));
}

}  // namespace

TEST_CASE("Example 1 ODE systems") {
  ParametricOdeSystem p = ode_of("example1.pde");
  const Signature& s = p.state_signature;
  CHECK(p.state_names() == std::vector<std::string>{"u", "u_x", "u_y"});
  check_system(p.odes[0], {"u_x", "u_x/(2*u_y+1)", "u_x/(2*u_y+1)"}, s);
  check_system(p.odes[1], {"u_y", "u_x/(2*u_y+1)", "u_y/(2*u_y+1)"}, s);
  REQUIRE(p.constraints.size() == 2);
  CHECK(testsupport::proportional(p.constraints[0], poly("u_x*u_y - u_x^2", s)));
  CHECK(testsupport::proportional(p.constraints[1], poly("u_y^2 + u_y - u", s)));
  REQUIRE(p.inequations.size() == 1);
  CHECK(testsupport::proportional(p.inequations[0], poly("2*u_y + 1", s)));
}

TEST_CASE("Eqs. (6) and (7)") {
  ParametricOdeSystem p = ode_of("detsys_rif.pde");
  const Signature& s = p.state_signature;
  CHECK(p.state_names() == std::vector<std::string>{"xi", "eta", "eta_x", "eta_y", "eta_xx"});
  check_system(p.odes[0], {"0", "eta_x", "eta_xx", "-eta_x/y", "y*eta_y/2 - eta/2"}, s);
  check_system(p.odes[1], {"0", "eta_y", "-eta_x/y", "(-y*eta_y + eta)/y^2", "-eta_xx/y"}, s);
  CHECK(p.constraints.empty());
}

TEST_CASE("renaming states back reproduces the reduced derivatives") {
  RifForm f = rif(load_system(testsupport::sample("detsys_rif.pde")));
  ParametricOdeSystem p = reduce_to_parametric_ode(f);
  Reducer red(f);
  std::map<Derivative, RationalExpr> back;
  for (std::size_t k = 0; k < p.n_states(); ++k) back[p.state(k)] = RationalExpr(DiffPolynomial::of(p.sources[k]));
  for (std::size_t i = 0; i < p.n_indep(); ++i)
    for (std::size_t k = 0; k < p.n_states(); ++k)
      CHECK(substitute(p.odes[i][k], back) == red.reduce(DiffPolynomial::of(p.sources[k].differentiated(i))));
}

TEST_CASE("formal compatibility") {
  CHECK(check_formal_compatibility(ode_of("example1.pde")).compatible());
  CHECK(check_formal_compatibility(ode_of("detsys_rif.pde")).compatible());
  CHECK(check_formal_compatibility(
            reduce_to_parametric_ode(rif(poly_to_diff(load_system(testsupport::sample("nilpotent.pde"))))))
            .compatible());

  Signature s{{"x", "y"}, {"u"}};
  ParametricOdeSystem toy = make_ode_system({"x", "y"}, {"u"}, {{expr("y*u", s)}, {RationalExpr(0)}});
  CompatibilityReport rep = check_formal_compatibility(toy);
  REQUIRE(rep.residuals.size() == 1);
  CHECK(rep.residuals[0].kind == CompatibilityResidual::Kind::CrossDerivative);
  CHECK((rep.residuals[0].residual == expr("u", s) || rep.residuals[0].residual == expr("-u", s)));

  ParametricOdeSystem plain = make_ode_system({"x", "y"}, {"u"}, {{expr("u", s)}, {RationalExpr(0)}});
  CHECK(check_formal_compatibility(plain).compatible());

  ParametricOdeSystem drifting = make_ode_system({"x", "y"}, {"u"}, {{expr("1", s)}, {RationalExpr(0)}},
                                                 {poly("u", s)});
  CompatibilityReport rep2 = check_formal_compatibility(drifting);
  REQUIRE(rep2.residuals.size() == 1);
  CHECK(rep2.residuals[0].kind == CompatibilityResidual::Kind::Constraint);
}

TEST_CASE("flow derivative uses the chain rule") {
  ParametricOdeSystem p = ode_of("example1.pde");
  const Signature& s = p.state_signature;
  CHECK(flow_derivative(p, expr("u_y^2 + u_y - u", s), 0).is_zero());
  CHECK(flow_derivative(p, expr("u", s), 1) == expr("u_y", s));
}

TEST_CASE("failures") {
  CHECK_THROWS_AS(ode_of("heat.pde"), Error);
  RifForm f = rif(load_system(testsupport::sample("example1.pde")));
  f.rules.pop_back();
  try {
    reduce_to_parametric_ode(f);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::Infinite || e.code() == ErrorCode::NotClosed));
  }
  Signature s{{"x"}, {"u"}};
  CHECK_THROWS_AS(make_ode_system({"x"}, {"u"}, {}), Error);
}
