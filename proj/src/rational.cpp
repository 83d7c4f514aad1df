#include "pde2ode/rational.hpp"

#include "pde2ode/error.hpp"

#include <cctype>

namespace pde2ode {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::UnknownSymbol: return "E_UNKNOWN_SYMBOL";
    case ErrorCode::BadArity: return "E_BAD_ARITY";
    case ErrorCode::DivZero: return "E_DIV_ZERO";
    case ErrorCode::NoDerivative: return "E_NO_DERIVATIVE";
    case ErrorCode::NonTermination: return "E_NONTERMINATION";
    case ErrorCode::Inconsistent: return "E_INCONSISTENT";
    case ErrorCode::Infinite: return "E_INFINITE";
    case ErrorCode::NotClosed: return "E_NOT_CLOSED";
    case ErrorCode::NotLinear: return "E_NOT_LINEAR";
    case ErrorCode::NotCommuting: return "E_NOT_COMMUTING";
    case ErrorCode::EigenFail: return "E_EIGEN_FAIL";
    case ErrorCode::Pivot: return "E_PIVOT";
    case ErrorCode::ProjectFail: return "E_PROJECT_FAIL";
    case ErrorCode::PivotAtPoint: return "E_PIVOT_AT_POINT";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error(ErrorCode::Syntax, "malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw bad();
    q.canonicalize();
    return q;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string digits;
  Integer scale = 1;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) scale *= 10;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  Rational q(Integer(digits, 10), scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a == 0) return abs(b);
  if (b == 0) return abs(a);
  Integer num, den;
  mpz_gcd(num.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  mpz_lcm(den.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  Rational g(num, den);
  g.canonicalize();
  return g;
}

}  // namespace pde2ode
