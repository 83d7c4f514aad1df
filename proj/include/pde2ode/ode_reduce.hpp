#pragma once

// First-order ODE systems in the parametric derivatives: one system per
// independent variable, sharing constraints and inequations.

#include "pde2ode/elimination.hpp"
#include "pde2ode/initial_data.hpp"

#include <string>
#include <vector>

namespace pde2ode {

/// States are the dependent variables of `state_signature` (one per
/// parametric derivative); every expression uses only order-zero states and
/// independent variables.
struct ParametricOdeSystem {
  Signature state_signature;
  std::vector<Derivative> sources;              // source derivative of each state
  Signature source_signature;
  Ranking source_ranking;
  std::vector<std::vector<RationalExpr>> odes;  // odes[i][k] = d v_k / d x_i
  std::vector<DiffPolynomial> constraints;      // h(x, v) = 0
  std::vector<DiffPolynomial> inequations;      // g(x, v) != 0

  std::size_t n_states() const { return state_signature.n_dep(); }
  std::size_t n_indep() const { return state_signature.n_indep(); }
  const std::vector<std::string>& state_names() const { return state_signature.dep_names; }
  Derivative state(std::size_t k) const { return Derivative::function(static_cast<int>(k), n_indep()); }

  /// Term order on the state ring that follows the source ranking.
  TermOrder state_order() const;
};

/// Throws E_INFINITE for an infinite-dimensional form and E_NOT_CLOSED when a
/// reduced derivative still involves a principal derivative.
ParametricOdeSystem reduce_to_parametric_ode(const RifForm& f);

/// A system given directly by its right-hand sides (states ordered as listed).
ParametricOdeSystem make_ode_system(const std::vector<std::string>& indep_names,
                                    const std::vector<std::string>& state_names,
                                    const std::vector<std::vector<RationalExpr>>& odes,
                                    const std::vector<DiffPolynomial>& constraints = {},
                                    const std::vector<DiffPolynomial>& inequations = {});

/// Chain-rule total derivative of g(x, v) along the i-th system.
RationalExpr flow_derivative(const ParametricOdeSystem& p, const RationalExpr& g, std::size_t i);

struct CompatibilityResidual {
  enum class Kind { CrossDerivative, Constraint };
  Kind kind = Kind::CrossDerivative;
  std::size_t i = 0;      // independent variable
  std::size_t j = 0;      // second independent variable (cross derivatives)
  std::size_t index = 0;  // state or constraint index
  RationalExpr residual;
};

struct CompatibilityReport {
  std::vector<CompatibilityResidual> residuals;  // nonzero ones only
  std::size_t checks = 0;
  bool compatible() const { return residuals.empty(); }
};

/// D_j f_i - D_i f_j for every state and pair i < j, and D_i h for every
/// constraint, each reduced modulo the constraint ideal.
CompatibilityReport check_formal_compatibility(const ParametricOdeSystem& p);

}  // namespace pde2ode
