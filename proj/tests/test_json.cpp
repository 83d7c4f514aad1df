#include <doctest.h>

#include "random_diffpoly.hpp"
#include "support.hpp"

#include "pde2ode/json_io.hpp"

#include <random>

using namespace pde2ode;

TEST_CASE("polynomial encoding round-trips") {
  std::mt19937 rng(71);
  testsupport::DiffPolyShape shape;
  Signature sig{{"x", "y"}, {"u", "v"}};
  for (int t = 0; t < 50; ++t) {
    DiffPolynomial p = testsupport::random_diffpoly(rng, shape);
    Json j = to_json(p, sig);
    CHECK(polynomial_from_json(j, sig) == p);
    CHECK(polynomial_from_json(Json::parse(j.dump()), sig) == p);
  }
  Json q = to_json(DiffPolynomial(Rational(-3, 7)), sig);
  CHECK(q[0]["coeff"] == "-3/7");
}

TEST_CASE("documents carry the schema tag") {
  RifForm f = rif(load_system(testsupport::sample("example1.pde")));
  Json jf = to_json(f);
  CHECK(jf["schema"] == kSchema);
  CHECK(jf["status"] == "complete");
  CHECK(jf["rules"].size() == 3);

  InitialData id = parametric_derivatives(f);
  Json ji = to_json(f, id);
  CHECK(ji["schema"] == kSchema);

  ParametricOdeSystem p = reduce_to_parametric_ode(f);
  CompatibilityReport rep = check_formal_compatibility(p);
  Json jp = to_json(p, &rep);
  CHECK(jp["schema"] == kSchema);
  CHECK(jp.dump() == to_json(reduce_to_parametric_ode(f), &rep).dump());
}

TEST_CASE("trajectories round-trip") {
  ParametricOdeSystem p = reduce_to_parametric_ode(rif(load_system(testsupport::sample("example1.pde"))));
  Trajectory t = integrate_along_curve(p, CurveSpec{{0, 0}, {1, 0}, 0.1, 3}, {2, 1, 1});
  Trajectory back = trajectory_from_json(Json::parse(to_json(t).dump()));
  CHECK(back.indep_names == t.indep_names);
  CHECK(back.state_names == t.state_names);
  REQUIRE(back.samples.size() == t.samples.size());
  for (std::size_t k = 0; k < t.samples.size(); ++k) {
    CHECK(back.samples[k].v == t.samples[k].v);
    CHECK(back.samples[k].x == t.samples[k].x);
  }
}

TEST_CASE("structure constants with and without an order") {
  RifForm f = rif(load_system(testsupport::sample("detsys_rif.pde")));
  InitialData id = parametric_derivatives(f);
  StructureConstants sc =
      structure_constants(f, id, VectorFieldSpec::parse("xi:x,eta:y", f.signature), {Rational(0), Rational(2)});
  Json with = to_json(sc, 3);
  Json without = to_json(sc, -1);
  CHECK(with["derived_dimension"] == 3);
  CHECK(with["derived_abelian"] == true);
  CHECK(with["linearizable_for_order"]["verdict"] == true);
  CHECK(without["linearizable_for_order"].is_null());
  CHECK(with["brackets"].is_array());
}
