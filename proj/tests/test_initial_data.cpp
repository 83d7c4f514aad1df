#include <doctest.h>

#include "support.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/initial_data.hpp"
#include "pde2ode/render.hpp"

#include <random>

using namespace pde2ode;

namespace {

RifForm form_of(const char* name) { return rif(load_system(testsupport::sample(name))); }

std::vector<std::string> names(const InitialData& id, const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& d : id.parametric) out.push_back(compact_name(d, sig));
  return out;
}

/// Multi-indices below the largest generator order that no generator divides.
std::size_t brute_force_count(const Staircase& s) {
  std::size_t count = 0;
  for (const auto& gens : s.generators) {
    int top = 0;
    for (const auto& g : gens) {
      int ord = 0;
      for (int v : g) ord += v;
      top = std::max(top, ord);
    }
    std::vector<int> idx(s.n_indep, 0);
    while (true) {
      bool below = std::none_of(gens.begin(), gens.end(), [&](const std::vector<int>& g) {
        for (std::size_t i = 0; i < g.size(); ++i)
          if (idx[i] < g[i]) return false;
        return true;
      });
      count += below;
      std::size_t i = 0;
      while (i < s.n_indep && ++idx[i] > top) idx[i++] = 0;
      if (i == s.n_indep) break;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("leading sets of the paper's systems") {
  Staircase ex1 = leading_set(form_of("example1.pde"));
  REQUIRE(ex1.generators.size() == 1);
  std::vector<std::vector<int>> g = ex1.generators[0];
  std::sort(g.begin(), g.end());
  CHECK(g == std::vector<std::vector<int>>{{0, 2}, {1, 1}, {2, 0}});
  CHECK(is_finite_dimensional(ex1));

  Staircase eq4 = leading_set(form_of("detsys_rif.pde"));
  REQUIRE(eq4.generators.size() == 2);
  std::vector<std::vector<int>> xi = eq4.generators[0];
  std::vector<std::vector<int>> eta = eq4.generators[1];
  std::sort(xi.begin(), xi.end());
  std::sort(eta.begin(), eta.end());
  CHECK(xi == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  CHECK(eta == std::vector<std::vector<int>>{{0, 2}, {1, 1}, {3, 0}});
  CHECK(is_finite_dimensional(eq4));
}

TEST_CASE("finiteness") {
  Staircase heat = leading_set(form_of("heat.pde"));
  CHECK_FALSE(is_finite_dimensional(heat));
  Staircase empty;
  empty.n_indep = 2;
  empty.generators.resize(1);
  CHECK_FALSE(is_finite_dimensional(empty));
  CHECK_THROWS_AS(parametric_derivatives(form_of("heat.pde")), Error);
  try {
    parametric_derivatives(form_of("heat.pde"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infinite);
  }
}

TEST_CASE("parametric derivatives and constants") {
  RifForm ex1 = form_of("example1.pde");
  InitialData id = parametric_derivatives(ex1);
  CHECK(names(id, ex1.signature) == std::vector<std::string>{"u", "u_x", "u_y"});
  CHECK(id.dimension() == 3);
  CHECK(id.point_symbols == std::vector<std::string>{"x_0", "y_0"});
  CHECK(id.constants == std::vector<std::string>{"C_1", "C_2", "C_3"});
  CHECK(constraints_among_parametric(ex1, id).size() == 2);

  RifForm eq4 = form_of("detsys_rif.pde");
  InitialData id4 = parametric_derivatives(eq4);
  CHECK(names(id4, eq4.signature) == std::vector<std::string>{"xi", "eta", "eta_x", "eta_y", "eta_xx"});
  CHECK(id4.dimension() == 5);
}

TEST_CASE("parametric count agrees with brute-force enumeration") {
  std::mt19937 rng(41);
  for (int t = 0; t < 30; ++t) {
    RifForm f;
    f.signature = Signature{{"x", "y", "z"}, {"u"}};
    f.ranking = Ranking::grlex(f.signature);
    std::uniform_int_distribution<int> e(0, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      std::vector<int> idx(3, 0);
      idx[i] = 1 + e(rng);
      f.rules.push_back(Rule{Derivative(0, idx), RationalExpr(0), DiffPolynomial(1)});
    }
    for (int k = 0; k < 3; ++k) {
      std::vector<int> idx = {e(rng), e(rng), e(rng)};
      Derivative d(0, idx);
      bool dup = std::any_of(f.rules.begin(), f.rules.end(), [&](const Rule& r) { return r.lead == d; });
      if (d.order() > 0 && !dup) f.rules.push_back(Rule{d, RationalExpr(0), DiffPolynomial(1)});
    }
    Staircase s = leading_set(f);
    InitialData id = parametric_derivatives(f);
    CHECK(id.dimension() == brute_force_count(s));
    for (const auto& d : id.parametric) CHECK_FALSE(s.is_principal(d));
  }
}
