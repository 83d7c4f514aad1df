#pragma once

// Structure of the finite-dimensional Lie algebra of vector fields whose
// coefficients solve a RIF form, computed from the form and its initial data.

#include "pde2ode/elimination.hpp"
#include "pde2ode/initial_data.hpp"
#include "pde2ode/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pde2ode {

/// dep_for_slot[l] is the dependent variable multiplying d/dx_l.
struct VectorFieldSpec {
  std::vector<int> dep_for_slot;

  /// "xi:x,eta:y"; throws E_USAGE when the assignment is not a bijection.
  static VectorFieldSpec parse(const std::string& text, const Signature& sig);
};

struct StructureConstants {
  std::size_t m = 0;
  std::vector<std::string> basis_names;   // names of the parametric derivatives, in basis order
  Signature point_signature;              // independent names x_0, y_0, ...; dependent names unused
  std::vector<Rational> point;
  /// symbolic[i][j][k]: rational function of the point symbols (empty when
  /// the constants were given directly).
  std::vector<std::vector<std::vector<RationalExpr>>> symbolic;
  /// values[i][j][k]: c_ijk at the point.
  std::vector<std::vector<std::vector<Rational>>> values;

  /// Constants given directly, for abstract algebras.
  static StructureConstants from_values(std::vector<std::vector<std::vector<Rational>>> c);

  bool antisymmetric() const;
  bool satisfies_jacobi() const;
};

struct StructureOptions {
  /// Basis order as names of parametric derivatives (compact form, e.g.
  /// "eta_x"); empty means the initial-data order.
  std::vector<std::string> basis_order;
};

/// Throws E_PIVOT_AT_POINT when an inequation vanishes at the point and
/// E_NOT_CLOSED when a reduced derivative is not expressible in parametric ones.
StructureConstants structure_constants(const RifForm& f, const InitialData& id, const VectorFieldSpec& vf,
                                       const std::vector<Rational>& point, const StructureOptions& opt = {});

/// Rank of the span of all bracket vectors at the point.
std::size_t derived_algebra_dimension(const StructureConstants& sc);

/// All brackets between spanning elements of the derived algebra vanish.
bool derived_algebra_is_abelian(const StructureConstants& sc);

bool linearizability_verdict(const StructureConstants& sc, int ode_order);

/// "x0=0,y0=2", "x_0=0, y_0=2" or "x=0,y=2"; exact rationals or decimals.
std::vector<Rational> parse_point(const std::string& text, const Signature& sig);

}  // namespace pde2ode
