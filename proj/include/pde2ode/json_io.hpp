#pragma once

// JSON documents for every public result type. Each top-level document
// carries "schema": "pde2ode/1".

#include "pde2ode/dae.hpp"
#include "pde2ode/elimination.hpp"
#include "pde2ode/initial_data.hpp"
#include "pde2ode/lie.hpp"
#include "pde2ode/ode_reduce.hpp"
#include "pde2ode/zero_dim.hpp"

#include <json.hpp>

namespace pde2ode {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "pde2ode/1";

Json to_json(const Rational& q);
Json to_json(const Derivative& d, const Signature& sig);
Json to_json(const DiffPolynomial& p, const Signature& sig);
Json to_json(const RationalExpr& e, const Signature& sig);
Json to_json(const Signature& sig);

Json to_json(const SystemSource& src);
Json to_json(const RifForm& f);
Json to_json(const RifForm& f, const InitialData& id);
Json to_json(const ParametricOdeSystem& p, const CompatibilityReport* report = nullptr);
Json to_json(const MultiplicationSystem& ms, const RootSet& roots);
Json to_json(const Trajectory& t);
/// A negative order leaves the linearizability entry null.
Json to_json(const StructureConstants& sc, int ode_order);

/// Inverse of the term-list encoding of a polynomial.
DiffPolynomial polynomial_from_json(const Json& j, const Signature& sig);

/// Reads a trajectory document written by to_json(Trajectory).
Trajectory trajectory_from_json(const Json& j);

}  // namespace pde2ode
