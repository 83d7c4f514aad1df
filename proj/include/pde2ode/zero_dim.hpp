#pragma once

// Zero-dimensional polynomial systems solved through the differential
// correspondence x_j <-> d/dx_j: the parametric ODE form of the associated
// constant-coefficient system gives commuting multiplication matrices.

#include "pde2ode/linalg.hpp"
#include "pde2ode/ode_reduce.hpp"
#include "pde2ode/parser.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace pde2ode {

/// One unknown u(x_1..x_n); x^a becomes D^a u and a constant c becomes c*u.
/// The input equations must be free of dependent variables.
SystemSource poly_to_diff(const SystemSource& polys);

struct MultiplicationSystem {
  std::vector<Derivative> basis;
  std::vector<std::string> basis_names;
  std::vector<RationalMatrix> matrices;  // dv/dx_i = X_i v
  std::size_t dimension() const { return basis.size(); }
};

/// X_i[k][r] is the coefficient of state r in f_i[k]. Throws E_NOT_LINEAR and
/// E_NOT_COMMUTING.
MultiplicationSystem build_multiplication_matrices(const ParametricOdeSystem& p);

struct Root {
  std::vector<std::complex<double>> coords;
  double residual = 0;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  std::vector<Rational> combination;  // coefficients c_i of the matrix that was split
};

struct SolveOptions {
  double tol = 1e-8;
  std::uint64_t seed = 20240601;
};

/// Roots of the original polynomials `polys` (each with residual and
/// multiplicity). Throws E_EIGEN_FAIL after one retry with fresh coefficients.
RootSet solve_zero_dim(const MultiplicationSystem& ms, const SystemSource& polys, const SolveOptions& opt = {});

/// poly_to_diff, rif, ODE reduction and matrix construction in one call.
MultiplicationSystem multiplication_system_for(const SystemSource& polys, int prolongation_cap = 4);

}  // namespace pde2ode
