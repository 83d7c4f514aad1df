#pragma once

#include "pde2ode/algebra.hpp"
#include "pde2ode/diffpoly.hpp"
#include "pde2ode/parser.hpp"

#include <string>

namespace pde2ode {

enum class DerivativeStyle {
  Source,   // diff(u,x,x,y): re-parseable
  Compact,  // u_xxy: state names and human-readable output
};

/// "u", "u_x", "eta_xx"; multi-letter variables are concatenated.
std::string compact_name(const Derivative& d, const Signature& sig);

std::string render(const Derivative& d, const Signature& sig, DerivativeStyle style = DerivativeStyle::Source);

/// Terms are listed largest first under `order`.
std::string render(const DiffPolynomial& p, const Signature& sig, DerivativeStyle style = DerivativeStyle::Source,
                   const TermOrder& order = TermOrder());

std::string render(const RationalExpr& e, const Signature& sig, DerivativeStyle style = DerivativeStyle::Source,
                   const TermOrder& order = TermOrder());

/// A `.pde` text that parse_system maps back to an equal SystemSource.
std::string render(const SystemSource& src);

}  // namespace pde2ode
