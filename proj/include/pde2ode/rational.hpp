#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pde2ode {

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator (mpq_class canonicalizes after every operation we use).
using Rational = mpq_class;
using Integer = mpz_class;

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Accepts "p", "-p", "p/q" and finite decimals such as "0.25".
Rational parse_rational(std::string_view text);

Rational rational_gcd(const Rational& a, const Rational& b);

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace pde2ode
