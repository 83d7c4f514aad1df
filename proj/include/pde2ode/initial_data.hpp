#pragma once

// Leading derivatives, the parametric derivatives they leave free, and the
// initial data that determine a local solution.

#include "pde2ode/elimination.hpp"

#include <string>
#include <vector>

namespace pde2ode {

/// Per dependent variable, the minimal multi-indices of the rule leads.
struct Staircase {
  std::vector<std::vector<std::vector<int>>> generators;  // [dep][k] -> idx
  std::size_t n_indep = 0;

  bool is_principal(const Derivative& d) const;
  friend bool operator==(const Staircase&, const Staircase&) = default;
};

Staircase leading_set(const RifForm& f);

/// Every dependent variable has a pure power of every independent variable
/// among its generators.
bool is_finite_dimensional(const Staircase& s);

struct InitialData {
  std::vector<Derivative> parametric;     // listing order
  std::vector<std::string> point_symbols; // x_0, y_0, ...
  std::vector<std::string> constants;     // C_1, ..., C_m

  std::size_t dimension() const { return parametric.size(); }
};

/// Throws E_INFINITE when the staircase has an infinite complement.
InitialData parametric_derivatives(const RifForm& f);

/// Constraints of f, which involve parametric derivatives only for complete forms.
std::vector<DiffPolynomial> constraints_among_parametric(const RifForm& f, const InitialData& id);

}  // namespace pde2ode
