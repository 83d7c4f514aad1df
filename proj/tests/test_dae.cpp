#include <doctest.h>

#include "support.hpp"

#include "pde2ode/dae.hpp"
#include "pde2ode/error.hpp"
#include "pde2ode/zero_dim.hpp"

#include <cmath>

using namespace pde2ode;
using testsupport::expr;

namespace {

ParametricOdeSystem example1() {
  return reduce_to_parametric_ode(rif(load_system(testsupport::sample("example1.pde"))));
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST_CASE("consistent starting points") {
  ParametricOdeSystem p = example1();
  CHECK(check_consistent_point(p, {0, 0}, {2, 1, 1}).ok);
  PointCheck bad = check_consistent_point(p, {0, 0}, {0, 1, 0});
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_constraint == doctest::Approx(1.0));
  PointCheck pivot = check_consistent_point(p, {0, 0}, {0.25 - 0.5, 0, -0.5});
  CHECK_FALSE(pivot.ok);
  CHECK(pivot.min_pivot < 1e-8);
  CHECK_THROWS_AS(check_consistent_point(p, {0}, {2, 1, 1}), Error);
}

TEST_CASE("a zero vector field gives a constant trajectory") {
  Signature s{{"x", "y"}, {"a", "b"}};
  ParametricOdeSystem p = make_ode_system({"x", "y"}, {"a", "b"}, {{expr("0", s), expr("0", s)}, {expr("0", s), expr("0", s)}});
  Trajectory t = integrate_along_curve(p, CurveSpec{{0, 0}, {1, 1}, 0.1, 10}, {3, -4});
  REQUIRE(t.samples.size() == 11);
  for (const auto& smp : t.samples) CHECK(smp.v == std::vector<double>{3, -4});
  CHECK(t.samples.back().t == doctest::Approx(1.0));
  CHECK(t.samples.back().x[1] == doctest::Approx(1.0));
}

TEST_CASE("RK4 is fourth order on the Example 1 x-flow") {
  ParametricOdeSystem p = example1();
  IntegrateOptions raw;
  raw.project = false;
  auto end = [&](double h, int n) {
    return integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, h, n}, {2, 1, 1}, raw).samples.back().v;
  };
  auto ref = end(0.001, 1000);
  double ratio = max_diff(end(0.1, 10), ref) / max_diff(end(0.05, 20), ref);
  CHECK(ratio >= 14);
  CHECK(ratio <= 18);
}

TEST_CASE("projection keeps the constraints") {
  ParametricOdeSystem p = example1();
  Trajectory t = integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, 0.01, 100}, {2, 1, 1});
  for (const auto& smp : t.samples) CHECK(smp.drift < 1e-9);

  IntegrateOptions raw;
  raw.project = false;
  Trajectory u = integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, 0.01, 100}, {2, 1, 1}, raw);
  CHECK(u.samples.back().drift <= 10 * std::pow(0.01, 4) * 100);
}

TEST_CASE("trajectories follow u = f(x+y) with 2f' + ln f' = s + const") {
  ParametricOdeSystem p = example1();
  Trajectory t = integrate_along_curve(p, CurveSpec{{0, 0}, {1, 1}, 0.01, 100}, {2, 1, 1});
  for (const auto& smp : t.samples) {
    double q = smp.v[1];
    CHECK(smp.v[1] == doctest::Approx(smp.v[2]).epsilon(1e-12));
    double s = smp.x[0] + smp.x[1];
    CHECK(2 * q + std::log(q) - s == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(smp.v[0] == doctest::Approx(q * q + q).epsilon(1e-10));
  }
}

TEST_CASE("pivots stop the integration before division by zero") {
  ParametricOdeSystem p = example1();
  const double uy = -0.45;
  try {
    integrate_along_curve(p, CurveSpec{{0, 0}, {0, 1}, 1e-3, 1000}, {uy * uy + uy, 0, uy});
    FAIL("expected E_PIVOT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Pivot);
    CHECK(std::string(e.what()).find("2*u_y + 1") != std::string::npos);
  }
}

TEST_CASE("inconsistent starts are rejected") {
  ParametricOdeSystem p = example1();
  try {
    integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, 0.01, 10}, {0, 1, 0});
    FAIL("expected E_INCONSISTENT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Inconsistent);
  }
  try {
    integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, 0.01, 10}, {-0.25, 0, -0.5});
    FAIL("expected E_PIVOT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Pivot);
  }
}

TEST_CASE("projection failure is reported") {
  Signature s{{"x"}, {"a", "b"}};
  ParametricOdeSystem p = make_ode_system({"x"}, {"a", "b"}, {{expr("1", s), expr("0", s)}},
                                          {testsupport::poly("a^2 + b^2 + 1", s)});
  IntegrateOptions loose;
  loose.tol = 10;
  try {
    integrate_along_curve(p, CurveSpec{{0}, {1}, 0.1, 3}, {0, 0}, loose);
    FAIL("expected E_PROJECT_FAIL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProjectFail);
  }
}

TEST_CASE("commuting flows") {
  ParametricOdeSystem eq67 = reduce_to_parametric_ode(rif(load_system(testsupport::sample("detsys_rif.pde"))));
  std::vector<double> d;
  for (double h : {0.1, 0.05, 0.025}) d.push_back(check_flow_commutativity(eq67, {0.3, 2}, {0.5, 1, -0.4, 0.3, 0.8}, h));
  CHECK(d[0] / d[1] >= 6);
  CHECK(d[1] / d[2] >= 6);

  SystemSource nil = parse_system("vars x, y;\neq x^2;\neq y^2;\neq x*y;\n");
  ParametricOdeSystem lin = reduce_to_parametric_ode(rif(poly_to_diff(nil)));
  CHECK(check_flow_commutativity(lin, {0, 0}, {1, 2, 3}, 0.01) < 1e-10);

  ParametricOdeSystem ex1 = example1();
  CHECK(check_flow_commutativity(ex1, {0, 0}, {2, 1, 1}, 0.1) < 1e-14);
}

TEST_CASE("an incompatible pair of flows has a second order defect") {
  Signature s{{"x", "y"}, {"u"}};
  ParametricOdeSystem toy = make_ode_system({"x", "y"}, {"u"}, {{expr("y*u", s)}, {RationalExpr(0)}});
  double d1 = check_flow_commutativity(toy, {0, 1}, {1}, 0.1);
  double d2 = check_flow_commutativity(toy, {0, 1}, {1}, 0.05);
  CHECK(d1 == doctest::Approx(std::exp(0.11) - std::exp(0.1)).epsilon(1e-4));
  CHECK(d1 / d2 > 3.5);
  CHECK(d1 / d2 < 4.5);
}

TEST_CASE("CSV output") {
  ParametricOdeSystem p = example1();
  Trajectory t = integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, 0.1, 2}, {2, 1, 1});
  std::string csv = trajectory_csv(t);
  CHECK(csv.rfind("t,x,y,u,u_x,u_y", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
