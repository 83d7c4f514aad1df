#include "pde2ode/render.hpp"

#include <algorithm>
#include <sstream>

namespace pde2ode {

std::string compact_name(const Derivative& d, const Signature& sig) {
  std::string s = sig.dep_names.at(static_cast<std::size_t>(d.dep));
  if (d.order() == 0) return s;
  s += '_';
  for (std::size_t i = 0; i < d.idx.size(); ++i)
    for (int k = 0; k < d.idx[i]; ++k) s += sig.indep_names[i];
  return s;
}

std::string render(const Derivative& d, const Signature& sig, DerivativeStyle style) {
  if (style == DerivativeStyle::Compact || d.order() == 0) return compact_name(d, sig);
  std::string s = "diff(" + sig.dep_names.at(static_cast<std::size_t>(d.dep));
  for (std::size_t i = 0; i < d.idx.size(); ++i) {
    if (d.idx[i] == 0) continue;
    if (d.idx[i] > 3) {
      s += "," + sig.indep_names[i] + "$" + std::to_string(d.idx[i]);
    } else {
      for (int k = 0; k < d.idx[i]; ++k) s += "," + sig.indep_names[i];
    }
  }
  return s + ")";
}

namespace {

std::string render_monomial(const Monomial& m, const Signature& sig, DerivativeStyle style,
                            const TermOrder& order) {
  std::vector<std::pair<Derivative, int>> fs = m.factors;
  std::sort(fs.begin(), fs.end(), [&](const auto& a, const auto& b) { return order.compare(a.first, b.first) > 0; });
  std::string out;
  auto append = [&](const std::string& base, int e) {
    if (!out.empty()) out += '*';
    out += base;
    if (e != 1) out += "^" + std::to_string(e);
  };
  for (const auto& [d, e] : fs) append(render(d, sig, style), e);
  for (const auto& [v, e] : m.indep) append(sig.indep_names.at(static_cast<std::size_t>(v)), e);
  return out;
}

}  // namespace

std::string render(const DiffPolynomial& p, const Signature& sig, DerivativeStyle style, const TermOrder& order) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : order.sorted_terms(p)) {
    std::string body;
    Rational mag = abs(c);
    if (m.is_one()) {
      body = to_string(mag);
    } else if (mag == 1) {
      body = render_monomial(m, sig, style, order);
    } else {
      body = to_string(mag) + "*" + render_monomial(m, sig, style, order);
    }
    if (first) {
      out = (c < 0 ? "-" : "") + body;
    } else {
      out += (c < 0 ? " - " : " + ") + body;
    }
    first = false;
  }
  return out;
}

std::string render(const RationalExpr& e, const Signature& sig, DerivativeStyle style, const TermOrder& order) {
  std::string num = render(e.num(), sig, style, order);
  if (e.den() == DiffPolynomial(1)) return num;
  if (e.num().size() > 1) num = "(" + num + ")";
  std::string den = render(e.den(), sig, style, order);
  bool bare = e.den().size() == 1 && e.den().terms().begin()->second == 1 &&
              e.den().terms().begin()->first.factors.size() + e.den().terms().begin()->first.indep.size() == 1;
  if (!bare) den = "(" + den + ")";
  return num + "/" + den;
}

std::string render(const SystemSource& src) {
  std::ostringstream os;
  const auto& sig = src.signature;
  os << "vars ";
  for (std::size_t i = 0; i < sig.n_indep(); ++i) os << (i ? ", " : "") << sig.indep_names[i];
  os << ";\n";
  if (sig.n_dep() > 0) {
    os << "funcs ";
    for (std::size_t k = 0; k < sig.n_dep(); ++k) {
      os << (k ? ", " : "") << sig.dep_names[k] << "(";
      for (std::size_t i = 0; i < sig.n_indep(); ++i) os << (i ? "," : "") << sig.indep_names[i];
      os << ")";
    }
    os << ";\n";
  }
  for (const auto& [k, v] : src.options) os << "option " << k << " = " << v << ";\n";
  for (const auto& eq : src.equations) os << "eq " << render(eq, sig) << " = 0;\n";
  for (const auto& g : src.inequations) os << "ineq " << render(g, sig) << ";\n";
  return os.str();
}

}  // namespace pde2ode
