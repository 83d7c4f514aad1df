#pragma once

#include "pde2ode/diffpoly.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pde2ode {

/// A parsed `.pde` file. Equations are stored as lhs - rhs (numerator only
/// when the difference is a quotient; the denominator becomes an inequation).
struct SystemSource {
  Signature signature;
  std::vector<DiffPolynomial> equations;
  std::vector<DiffPolynomial> inequations;
  std::map<std::string, std::string> options;

  friend bool operator==(const SystemSource&, const SystemSource&) = default;
};

/// Grammar (statements end with ';', '#' starts a line comment):
///
///   vars x, y;                       once, first
///   funcs u(x,y), v(x,y);            at most once; functions of all vars
///   eq <expr> [= <expr>];            repeated, at least one
///   ineq <expr>;                     optional
///   option <name> = <value>;         optional
///
/// Expressions use + - * / ^ (nonnegative integer exponents), parentheses,
/// rational literals, and diff(e, x, x, y) or diff(e, x$2, y).
///
/// Throws E_SYNTAX, E_UNKNOWN_SYMBOL or E_BAD_ARITY with line:column.
SystemSource parse_system(std::string_view text);

/// Reads and parses a file; E_IO when unreadable.
SystemSource load_system(const std::filesystem::path& path);

/// Parses a single expression against a known signature.
RationalExpr parse_expression(std::string_view text, const Signature& sig);

}  // namespace pde2ode
