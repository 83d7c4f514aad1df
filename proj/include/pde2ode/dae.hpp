#pragma once

// Numerical integration of a parametric ODE system along straight curves in
// the space of independent variables, with projection onto the constraints
// and monitoring of the pivots.

#include "pde2ode/ode_reduce.hpp"

#include <limits>
#include <string>
#include <vector>

namespace pde2ode {

struct CurveSpec {
  std::vector<double> start;      // x^0
  std::vector<double> direction;  // d, nonzero
  double h = 0.01;
  int steps = 1;
};

struct Sample {
  double t = 0;
  std::vector<double> x;
  std::vector<double> v;
  double drift = 0;                                            // max |h(x, v)|
  double pivot_margin = std::numeric_limits<double>::infinity();  // min |g(x, v)|
};

struct Trajectory {
  std::vector<std::string> indep_names;
  std::vector<std::string> state_names;
  std::vector<Sample> samples;  // steps + 1 entries, the first is the start
};

struct PointCheck {
  bool ok = true;
  std::vector<std::string> violations;
  double max_constraint = 0;
  double min_pivot = std::numeric_limits<double>::infinity();
};

PointCheck check_consistent_point(const ParametricOdeSystem& p, const std::vector<double>& x0,
                                  const std::vector<double>& v0, double tol = 1e-10, double guard = 1e-8);

struct IntegrateOptions {
  bool project = true;
  double guard = 1e-8;
  double tol = 1e-10;  // admissible constraint violation at the start
};

/// Classical RK4 on dv/dt = sum_i d_i f_i(x^0 + t d, v). Throws E_PIVOT when a
/// pivot approaches zero inside a step, E_PROJECT_FAIL when the projection
/// cannot restore the constraints, and E_INCONSISTENT for an inconsistent
/// starting point.
Trajectory integrate_along_curve(const ParametricOdeSystem& p, const CurveSpec& c, const std::vector<double>& v0,
                                 const IntegrateOptions& opt = {});

/// One step of size h along x_i then x_j, against the reverse order; returns
/// the max-norm difference of the end states.
double check_flow_commutativity(const ParametricOdeSystem& p, const std::vector<double>& x0,
                                const std::vector<double>& v0, double h, std::size_t i = 0, std::size_t j = 1,
                                const IntegrateOptions& opt = {});

std::string trajectory_csv(const Trajectory& t);

}  // namespace pde2ode
