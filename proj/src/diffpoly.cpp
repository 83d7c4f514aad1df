#include "pde2ode/diffpoly.hpp"

#include "pde2ode/algebra.hpp"
#include "pde2ode/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pde2ode {

// ---------------------------------------------------------------------------
// Signature

int Signature::find_indep(const std::string& name) const {
  for (std::size_t i = 0; i < indep_names.size(); ++i)
    if (indep_names[i] == name) return static_cast<int>(i);
  return -1;
}

int Signature::find_dep(const std::string& name) const {
  for (std::size_t i = 0; i < dep_names.size(); ++i)
    if (dep_names[i] == name) return static_cast<int>(i);
  return -1;
}

void Signature::validate() const {
  if (indep_names.empty()) throw Error(ErrorCode::Syntax, "no independent variables declared");
  std::set<std::string> seen;
  for (const auto& n : indep_names)
    if (!seen.insert(n).second) throw Error(ErrorCode::Syntax, "duplicate name '" + n + "'");
  for (const auto& n : dep_names)
    if (!seen.insert(n).second) throw Error(ErrorCode::Syntax, "duplicate name '" + n + "'");
}

// ---------------------------------------------------------------------------
// Derivative

int Derivative::order() const {
  int s = 0;
  for (int k : idx) s += k;
  return s;
}

Derivative Derivative::differentiated(std::size_t i, int times) const {
  Derivative d = *this;
  d.idx[i] += times;
  return d;
}

bool Derivative::is_derivative_of(const Derivative& other) const {
  if (dep != other.dep || idx.size() != other.idx.size()) return false;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[i] < other.idx[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Monomial

namespace {

template <class K>
std::vector<std::pair<K, int>> merge_exponents(const std::vector<std::pair<K, int>>& a,
                                               const std::vector<std::pair<K, int>>& b, int sign_b) {
  std::vector<std::pair<K, int>> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
      out.emplace_back(j->first, sign_b * j->second);
      ++j;
    } else {
      int e = i->second + sign_b * j->second;
      if (e != 0) out.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

template <class K, class Pick>
std::vector<std::pair<K, int>> combine_exponents(const std::vector<std::pair<K, int>>& a,
                                                 const std::vector<std::pair<K, int>>& b, bool keep_missing,
                                                 Pick pick) {
  std::vector<std::pair<K, int>> out;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      if (keep_missing) out.push_back(*i);
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      if (keep_missing) out.push_back(*j);
      ++j;
    } else {
      out.emplace_back(i->first, pick(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class K>
int exponent_of(const std::vector<std::pair<K, int>>& v, const K& key) {
  auto it = std::lower_bound(v.begin(), v.end(), key,
                             [](const std::pair<K, int>& p, const K& k) { return p.first < k; });
  return (it != v.end() && it->first == key) ? it->second : 0;
}

template <class K>
bool exponents_divide(const std::vector<std::pair<K, int>>& a, const std::vector<std::pair<K, int>>& b) {
  auto j = b.begin();
  for (const auto& [k, e] : a) {
    while (j != b.end() && j->first < k) ++j;
    if (j == b.end() || !(j->first == k) || j->second < e) return false;
  }
  return true;
}

}  // namespace

int Monomial::degree(const Derivative& d) const { return exponent_of(factors, d); }
int Monomial::indep_degree(int var) const { return exponent_of(indep, var); }

int Monomial::total_degree() const {
  int s = 0;
  for (const auto& f : factors) s += f.second;
  for (const auto& f : indep) s += f.second;
  return s;
}

bool Monomial::divides(const Monomial& other) const {
  return exponents_divide(factors, other.factors) && exponents_divide(indep, other.indep);
}

Monomial Monomial::cofactor_in(const Monomial& other) const {
  Monomial m;
  m.factors = merge_exponents(other.factors, factors, -1);
  m.indep = merge_exponents(other.indep, indep, -1);
  return m;
}

Monomial Monomial::lcm(const Monomial& other) const {
  auto mx = [](int a, int b) { return std::max(a, b); };
  Monomial m;
  m.factors = combine_exponents(factors, other.factors, true, mx);
  m.indep = combine_exponents(indep, other.indep, true, mx);
  return m;
}

Monomial Monomial::gcd(const Monomial& other) const {
  auto mn = [](int a, int b) { return std::min(a, b); };
  Monomial m;
  m.factors = combine_exponents(factors, other.factors, false, mn);
  m.indep = combine_exponents(indep, other.indep, false, mn);
  return m;
}

Monomial Monomial::of(const Derivative& d, int exp) {
  Monomial m;
  if (exp > 0) m.factors.emplace_back(d, exp);
  return m;
}

Monomial Monomial::of_indep(int var, int exp) {
  Monomial m;
  if (exp > 0) m.indep.emplace_back(var, exp);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.factors = merge_exponents(a.factors, b.factors, 1);
  m.indep = merge_exponents(a.indep, b.indep, 1);
  return m;
}

// ---------------------------------------------------------------------------
// DiffPolynomial

DiffPolynomial::DiffPolynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

DiffPolynomial DiffPolynomial::of(const Derivative& d) { return term(Monomial::of(d), 1); }

DiffPolynomial DiffPolynomial::indep_var(int var) { return term(Monomial::of_indep(var), 1); }

DiffPolynomial DiffPolynomial::term(const Monomial& m, const Rational& c) {
  DiffPolynomial p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool DiffPolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational DiffPolynomial::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

bool DiffPolynomial::has_derivatives() const {
  for (const auto& t : terms_)
    if (!t.first.factors.empty()) return true;
  return false;
}

std::set<Derivative> DiffPolynomial::derivatives() const {
  std::set<Derivative> out;
  for (const auto& t : terms_)
    for (const auto& f : t.first.factors) out.insert(f.first);
  return out;
}

std::set<int> DiffPolynomial::indep_vars() const {
  std::set<int> out;
  for (const auto& t : terms_)
    for (const auto& f : t.first.indep) out.insert(f.first);
  return out;
}

int DiffPolynomial::max_order() const {
  int best = -1;
  for (const auto& t : terms_)
    for (const auto& f : t.first.factors) best = std::max(best, f.first.order());
  return best;
}

int DiffPolynomial::degree(const Derivative& d) const {
  int best = 0;
  for (const auto& t : terms_) best = std::max(best, t.first.degree(d));
  return best;
}

int DiffPolynomial::total_degree() const {
  int best = 0;
  for (const auto& t : terms_) best = std::max(best, t.first.total_degree());
  return best;
}

std::vector<DiffPolynomial> DiffPolynomial::coefficients(const Derivative& d) const {
  std::vector<DiffPolynomial> out(static_cast<std::size_t>(degree(d)) + 1);
  for (const auto& [m, c] : terms_) {
    int e = m.degree(d);
    Monomial rest = Monomial::of(d, e).cofactor_in(m);
    out[static_cast<std::size_t>(e)].add_term(rest, c);
  }
  return out;
}

Rational DiffPolynomial::content() const {
  Rational g = 0;
  for (const auto& t : terms_) g = rational_gcd(g, t.second);
  return g;
}

Monomial DiffPolynomial::monomial_content() const {
  if (terms_.empty()) return Monomial{};
  Monomial g = terms_.begin()->first;
  for (const auto& t : terms_) g = g.gcd(t.first);
  return g;
}

void DiffPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

DiffPolynomial& DiffPolynomial::operator+=(const DiffPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPolynomial& DiffPolynomial::operator-=(const DiffPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPolynomial& DiffPolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.second *= c;
  }
  return *this;
}

DiffPolynomial DiffPolynomial::operator-() const {
  DiffPolynomial p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

DiffPolynomial operator*(const DiffPolynomial& a, const DiffPolynomial& b) {
  DiffPolynomial p;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) p.add_term(ma * mb, ca * cb);
  return p;
}

DiffPolynomial DiffPolynomial::mul_monomial(const Monomial& m, const Rational& c) const {
  DiffPolynomial p;
  if (c == 0) return p;
  for (const auto& [mm, cc] : terms_) p.terms_.emplace_hint(p.terms_.end(), mm * m, cc * c);
  return p;
}

bool operator==(const DiffPolynomial& a, const DiffPolynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto i = a.terms_.begin();
  for (auto j = b.terms_.begin(); j != b.terms_.end(); ++i, ++j)
    if (!(i->first == j->first) || i->second != j->second) return false;
  return true;
}

bool operator<(const DiffPolynomial& a, const DiffPolynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
  auto i = a.terms_.begin();
  for (auto j = b.terms_.begin(); j != b.terms_.end(); ++i, ++j) {
    if (auto c = i->first <=> j->first; c != 0) return c < 0;
    if (i->second != j->second) return i->second < j->second;
  }
  return false;
}

DiffPolynomial pow(const DiffPolynomial& p, int e) {
  DiffPolynomial result(1);
  DiffPolynomial base = p;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

DiffPolynomial total_derivative(const DiffPolynomial& p, std::size_t i) {
  DiffPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    for (const auto& [d, e] : m.factors) {
      Monomial rest = Monomial::of(d, 1).cofactor_in(m);
      out.add_term(rest * Monomial::of(d.differentiated(i)), c * e);
    }
    int e = m.indep_degree(static_cast<int>(i));
    if (e > 0) out.add_term(Monomial::of_indep(static_cast<int>(i)).cofactor_in(m), c * e);
  }
  return out;
}

DiffPolynomial partial(const DiffPolynomial& p, const Derivative& d) {
  DiffPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    int e = m.degree(d);
    if (e > 0) out.add_term(Monomial::of(d).cofactor_in(m), c * e);
  }
  return out;
}

DiffPolynomial partial_indep(const DiffPolynomial& p, int var) {
  DiffPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    int e = m.indep_degree(var);
    if (e > 0) out.add_term(Monomial::of_indep(var).cofactor_in(m), c * e);
  }
  return out;
}

DiffPolynomial rename(const DiffPolynomial& p, const std::function<Derivative(const Derivative&)>& f) {
  DiffPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    Monomial r;
    r.indep = m.indep;
    for (const auto& [d, e] : m.factors) r = r * Monomial::of(f(d), e);
    out.add_term(r, c);
  }
  return out;
}

DiffPolynomial substitute(const DiffPolynomial& p, const Derivative& d, const DiffPolynomial& q) {
  auto coeffs = p.coefficients(d);
  DiffPolynomial out;
  DiffPolynomial qk(1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) qk = qk * q;
    out += coeffs[k] * qk;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RationalExpr

RationalExpr::RationalExpr(const DiffPolynomial& num) : num_(num), den_(1) {}

RationalExpr::RationalExpr(DiffPolynomial num, DiffPolynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorCode::DivZero, "zero denominator");
  normalize();
}

void RationalExpr::normalize() {
  if (num_.is_zero()) {
    den_ = DiffPolynomial(1);
    return;
  }
  Monomial g = num_.monomial_content().gcd(den_.monomial_content());
  if (!g.is_one()) {
    num_ = *exact_divide(num_, DiffPolynomial::term(g, 1));
    den_ = *exact_divide(den_, DiffPolynomial::term(g, 1));
  }
  if (den_.is_constant()) {
    num_ *= Rational(1 / den_.constant_term());
    den_ = DiffPolynomial(1);
    return;
  }
  if (auto q = exact_divide(num_, den_)) {
    num_ = *q;
    den_ = DiffPolynomial(1);
    return;
  }
  if (auto q = exact_divide(den_, num_)) {
    den_ = *q;
    num_ = DiffPolynomial(1);
  }
  static const TermOrder natural;
  Rational scale = den_.content();
  if (natural.leading_coefficient(den_) < 0) scale = -scale;
  den_ *= Rational(1 / scale);
  num_ *= Rational(1 / scale);
  if (den_.is_constant()) {
    num_ *= Rational(1 / den_.constant_term());
    den_ = DiffPolynomial(1);
  }
}

RationalExpr& RationalExpr::operator+=(const RationalExpr& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RationalExpr& RationalExpr::operator-=(const RationalExpr& o) { return *this += -o; }

RationalExpr& RationalExpr::operator*=(const RationalExpr& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalExpr& RationalExpr::operator/=(const RationalExpr& o) {
  if (o.num_.is_zero()) throw Error(ErrorCode::DivZero, "division by zero expression");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

bool operator==(const RationalExpr& a, const RationalExpr& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

RationalExpr total_derivative(const RationalExpr& e, std::size_t i) {
  const auto& n = e.num();
  const auto& d = e.den();
  if (d.is_constant()) return RationalExpr(total_derivative(n, i), d);
  return RationalExpr(total_derivative(n, i) * d - n * total_derivative(d, i), d * d);
}

RationalExpr partial(const RationalExpr& e, const Derivative& v) {
  const auto& n = e.num();
  const auto& d = e.den();
  if (d.is_constant()) return RationalExpr(partial(n, v), d);
  return RationalExpr(partial(n, v) * d - n * partial(d, v), d * d);
}

RationalExpr partial_indep(const RationalExpr& e, int var) {
  const auto& n = e.num();
  const auto& d = e.den();
  if (d.is_constant()) return RationalExpr(partial_indep(n, var), d);
  return RationalExpr(partial_indep(n, var) * d - n * partial_indep(d, var), d * d);
}

namespace {

RationalExpr substitute_poly(const DiffPolynomial& p, const std::map<Derivative, RationalExpr>& derivs,
                             const std::map<int, RationalExpr>& indeps) {
  RationalExpr total;
  for (const auto& [m, c] : p.terms()) {
    RationalExpr t(c);
    Monomial kept;
    for (const auto& [d, e] : m.factors) {
      auto it = derivs.find(d);
      if (it == derivs.end()) {
        kept = kept * Monomial::of(d, e);
      } else {
        for (int k = 0; k < e; ++k) t *= it->second;
      }
    }
    for (const auto& [v, e] : m.indep) {
      auto it = indeps.find(v);
      if (it == indeps.end()) {
        kept = kept * Monomial::of_indep(v, e);
      } else {
        for (int k = 0; k < e; ++k) t *= it->second;
      }
    }
    if (!kept.is_one()) t *= RationalExpr(DiffPolynomial::term(kept, 1));
    total += t;
  }
  return total;
}

}  // namespace

RationalExpr substitute(const RationalExpr& e, const std::map<Derivative, RationalExpr>& derivs,
                        const std::map<int, RationalExpr>& indeps) {
  RationalExpr n = substitute_poly(e.num(), derivs, indeps);
  RationalExpr d = substitute_poly(e.den(), derivs, indeps);
  if (d.is_zero()) throw Error(ErrorCode::DivZero, "denominator vanishes after substitution");
  return n / d;
}

double evaluate(const RationalExpr& e, const std::map<Derivative, double>& point, std::span<const double> indep) {
  auto deriv_value = [&](const Derivative& d) {
    auto it = point.find(d);
    if (it == point.end()) throw Error(ErrorCode::UnknownSymbol, "unbound derivative in evaluation");
    return it->second;
  };
  auto indep_value = [&](int v) {
    if (v < 0 || static_cast<std::size_t>(v) >= indep.size())
      throw Error(ErrorCode::UnknownSymbol, "unbound independent variable in evaluation");
    return indep[static_cast<std::size_t>(v)];
  };
  double den = evaluate_poly<double>(e.den(), deriv_value, indep_value);
  if (std::abs(den) <= 1e-12) throw Error(ErrorCode::DivZero, "denominator vanishes at the point");
  return evaluate_poly<double>(e.num(), deriv_value, indep_value) / den;
}

double evaluate(const RationalExpr& e, const std::map<Derivative, double>& point, const Signature& sig,
                const std::map<std::string, double>& indep) {
  std::vector<double> values(sig.n_indep(), 0.0);
  std::vector<bool> bound(sig.n_indep(), false);
  for (const auto& [name, v] : indep) {
    int i = sig.find_indep(name);
    if (i < 0) throw Error(ErrorCode::UnknownSymbol, "unknown independent variable '" + name + "'");
    values[static_cast<std::size_t>(i)] = v;
    bound[static_cast<std::size_t>(i)] = true;
  }
  auto vars = e.num().indep_vars();
  auto dvars = e.den().indep_vars();
  vars.insert(dvars.begin(), dvars.end());
  for (int v : vars)
    if (!bound[static_cast<std::size_t>(v)])
      throw Error(ErrorCode::UnknownSymbol, "unbound independent variable '" + sig.indep_names[v] + "'");
  return evaluate(e, point, values);
}

Rational evaluate_exact(const DiffPolynomial& p, const std::map<Derivative, Rational>& point,
                        std::span<const Rational> indep) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (const auto& [d, e] : m.factors) {
      auto it = point.find(d);
      if (it == point.end()) throw Error(ErrorCode::UnknownSymbol, "unbound derivative in evaluation");
      for (int k = 0; k < e; ++k) t *= it->second;
    }
    for (const auto& [v, e] : m.indep) {
      if (v < 0 || static_cast<std::size_t>(v) >= indep.size())
        throw Error(ErrorCode::UnknownSymbol, "unbound independent variable in evaluation");
      for (int k = 0; k < e; ++k) t *= indep[static_cast<std::size_t>(v)];
    }
    total += t;
  }
  return total;
}

}  // namespace pde2ode
