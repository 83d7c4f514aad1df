#include "pde2ode/elimination.hpp"

#include "pde2ode/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace pde2ode {

// ---------------------------------------------------------------------------
// Ranking

Ranking::Ranking(std::vector<int> indep_order, std::vector<int> dep_order)
    : indep_order_(std::move(indep_order)), dep_order_(std::move(dep_order)) {
  dep_rank_.assign(dep_order_.size(), 0);
  for (std::size_t k = 0; k < dep_order_.size(); ++k) dep_rank_.at(static_cast<std::size_t>(dep_order_[k])) = static_cast<int>(k);
}

Ranking Ranking::grlex(const Signature& sig) {
  std::vector<int> indep(sig.n_indep());
  std::vector<int> dep(sig.n_dep());
  std::iota(indep.begin(), indep.end(), 0);
  std::iota(dep.begin(), dep.end(), 0);
  return Ranking(indep, dep);
}

std::strong_ordering Ranking::compare(const Derivative& a, const Derivative& b) const {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  for (int i : indep_order_)
    if (auto c = a.idx[static_cast<std::size_t>(i)] <=> b.idx[static_cast<std::size_t>(i)]; c != 0) return c;
  if (a.dep == b.dep) return std::strong_ordering::equal;
  auto rank = [&](int dep) {
    return static_cast<std::size_t>(dep) < dep_rank_.size() ? dep_rank_[static_cast<std::size_t>(dep)] : dep;
  };
  return rank(a.dep) <=> rank(b.dep);
}

TermOrder Ranking::term_order() const {
  Ranking copy = *this;
  return TermOrder([copy](const Derivative& a, const Derivative& b) { return copy.compare(a, b); });
}

bool listing_less(const Derivative& a, const Derivative& b, const Ranking& r) {
  if (a.order() != b.order()) return a.order() < b.order();
  for (int i : r.indep_order()) {
    auto k = static_cast<std::size_t>(i);
    if (a.idx[k] != b.idx[k]) return a.idx[k] > b.idx[k];
  }
  return r.compare(a, b) < 0;
}

Derivative leading_derivative(const DiffPolynomial& p, const Ranking& r) {
  const Derivative* best = nullptr;
  for (const auto& [m, c] : p.terms())
    for (const auto& f : m.factors)
      if (!best || r.compare(f.first, *best) > 0) best = &f.first;
  if (!best) throw Error(ErrorCode::NoDerivative, "expression contains no derivative");
  return *best;
}

const char* to_string(PivotVerdict v) {
  switch (v) {
    case PivotVerdict::Consistent: return "consistent";
    case PivotVerdict::Inconsistent: return "inconsistent";
    case PivotVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Fractions with a factored denominator: num / (scale * prod atom^e).

namespace {

struct Fraction {
  DiffPolynomial num;
  Rational scale{1};
  std::map<DiffPolynomial, int> atoms;
};

DiffPolynomial expand_den(const Fraction& f) {
  DiffPolynomial d(f.scale);
  for (const auto& [a, e] : f.atoms) d = d * pow(a, e);
  return d;
}

Fraction from_expr(const RationalExpr& e, const TermOrder& order) {
  Fraction f;
  f.num = e.num();
  Factored fd = split_factors(e.den(), order);
  f.scale = fd.scale;
  for (auto& [a, k] : fd.atoms) f.atoms[a] += k;
  return f;
}

RationalExpr to_expr(const Fraction& f) {
  DiffPolynomial den(1);
  for (const auto& [a, e] : f.atoms) den = den * pow(a, e);
  return RationalExpr(f.num * Rational(1 / f.scale), den);
}

bool mentions(const DiffPolynomial& p, const std::function<bool(const Derivative&)>& pred) {
  for (const auto& [m, c] : p.terms())
    for (const auto& fct : m.factors)
      if (pred(fct.first)) return true;
  return false;
}

Fraction subtract(const Fraction& a, const Fraction& b) {
  Fraction out;
  out.scale = a.scale * b.scale;
  for (const auto& [atom, e] : a.atoms) out.atoms[atom] = e;
  for (const auto& [atom, e] : b.atoms) out.atoms[atom] = std::max(out.atoms[atom], e);
  auto cofactor = [&](const Fraction& f) {
    DiffPolynomial c(1);
    for (const auto& [atom, e] : out.atoms) {
      auto it = f.atoms.find(atom);
      int have = it == f.atoms.end() ? 0 : it->second;
      if (e > have) c = c * pow(atom, e - have);
    }
    return c;
  };
  out.num = a.num * cofactor(a) * b.scale - b.num * cofactor(b) * a.scale;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reducer

struct RuleData {
  Derivative lead;
  Fraction rhs;
};

struct Reducer::Impl {
  Impl(const Signature& sig_, const Ranking& ranking_, std::vector<RuleData> rules_,
       std::vector<DiffPolynomial> constraints_)
      : sig(sig_), ranking(ranking_), order(ranking_.term_order()), rules(std::move(rules_)),
        constraints(std::move(constraints_)) {
    by_dep.resize(sig.n_dep());
    for (std::size_t k = 0; k < rules.size(); ++k)
      by_dep.at(static_cast<std::size_t>(rules[k].lead.dep)).push_back(k);
  }

  const RuleData* rule_for(const Derivative& d) const {
    if (static_cast<std::size_t>(d.dep) >= by_dep.size()) return nullptr;
    const RuleData* best = nullptr;
    for (std::size_t k : by_dep[static_cast<std::size_t>(d.dep)]) {
      const RuleData& r = rules[k];
      if (d.is_derivative_of(r.lead) && (!best || ranking.compare(r.lead, best->lead) > 0)) best = &r;
    }
    return best;
  }

  bool is_principal(const Derivative& d) const { return rule_for(d) != nullptr; }

  bool has_principal(const DiffPolynomial& p) const {
    return mentions(p, [&](const Derivative& d) { return is_principal(d); });
  }

  bool fraction_has_principal(const Fraction& f) const {
    if (has_principal(f.num)) return true;
    for (const auto& [a, e] : f.atoms)
      if (has_principal(a)) return true;
    return false;
  }

  void add_atoms(Fraction& f, const DiffPolynomial& p, int times) {
    Factored fp = split_factors(p, order);
    for (int k = 0; k < times; ++k) f.scale *= fp.scale;
    for (const auto& [a, e] : fp.atoms) {
      f.atoms[a] += e * times;
      pivots.insert(a);
    }
  }

  void cancel(Fraction& f) {
    if (f.num.is_zero()) {
      f.atoms.clear();
      f.scale = 1;
      return;
    }
    for (auto it = f.atoms.begin(); it != f.atoms.end();) {
      while (it->second > 0) {
        auto q = exact_divide(f.num, it->first);
        if (!q) break;
        f.num = std::move(*q);
        --it->second;
      }
      it = it->second == 0 ? f.atoms.erase(it) : std::next(it);
    }
    Rational c = f.num.content();
    if (c != 1) {
      f.num *= Rational(1 / c);
      f.scale /= c;
    }
  }

  // Factors known to be nonzero may be dropped when only the vanishing of the
  // result matters.
  void strip_nonzero(DiffPolynomial& num) const {
    if (num.is_zero()) return;
    for (const auto& g : nonzero) {
      while (!num.is_constant()) {
        auto q = exact_divide(num, g);
        if (!q) break;
        num = std::move(*q);
        stripped = true;
      }
    }
  }

  Fraction differentiate(const Fraction& f, std::size_t i) const {
    Fraction out;
    out.scale = f.scale;
    if (f.atoms.empty()) {
      out.num = total_derivative(f.num, i);
      return out;
    }
    DiffPolynomial all(1);
    for (const auto& [a, e] : f.atoms) all = all * a;
    DiffPolynomial sum;
    for (const auto& [a, e] : f.atoms) {
      DiffPolynomial da = total_derivative(a, i);
      if (da.is_zero()) continue;
      sum += da * (*exact_divide(all, a)) * Rational(e);
    }
    out.num = total_derivative(f.num, i) * all - f.num * sum;
    for (const auto& [a, e] : f.atoms) out.atoms[a] = e + 1;
    return out;
  }

  std::optional<Derivative> highest_principal(const DiffPolynomial& p) const {
    std::optional<Derivative> best;
    for (const auto& d : p.derivatives())
      if (is_principal(d) && (!best || ranking.compare(d, *best) > 0)) best = d;
    return best;
  }

  Fraction reduce(Fraction f, bool zero_test = false) {
    for (;;) {
      bool changed = false;
      for (auto it = f.atoms.begin(); it != f.atoms.end(); ++it) {
        if (!has_principal(it->first)) continue;
        DiffPolynomial atom = it->first;
        int e = it->second;
        f.atoms.erase(it);
        Fraction av;
        av.num = atom;
        av = reduce(av);
        if (av.num.is_zero()) throw Error(ErrorCode::DivZero, "a pivot reduces to zero");
        // 1/atom^e = den(av)^e / num(av)^e
        f.num = f.num * pow(expand_den(av), e);
        add_atoms(f, av.num, e);
        changed = true;
        break;
      }
      if (changed) continue;
      auto theta = highest_principal(f.num);
      if (!theta) break;
      Fraction val = value(*theta);
      auto coeffs = f.num.coefficients(*theta);
      int deg = static_cast<int>(coeffs.size()) - 1;
      DiffPolynomial den = expand_den(val);
      std::vector<DiffPolynomial> den_pow{DiffPolynomial(1)};
      for (int k = 1; k <= deg; ++k) den_pow.push_back(den_pow.back() * den);
      DiffPolynomial acc = coeffs[static_cast<std::size_t>(deg)];
      for (int k = deg - 1; k >= 0; --k)
        acc = acc * val.num + coeffs[static_cast<std::size_t>(k)] * den_pow[static_cast<std::size_t>(deg - k)];
      f.num = std::move(acc);
      for (int k = 0; k < deg; ++k) f.scale *= val.scale;
      for (const auto& [a, e] : val.atoms) f.atoms[a] += e * deg;
    }
    cancel(f);
    if (zero_test) strip_nonzero(f.num);
    for (int pass = 0; pass < 4; ++pass) {
      DiffPolynomial before = f.num;
      f.num = normal_form(f.num, constraints, order);
      cancel(f);
      if (zero_test) strip_nonzero(f.num);
      if (f.num == before) break;
    }
    for (const auto& [a, e] : f.atoms) pivots.insert(a);
    return f;
  }

  Fraction value(const Derivative& d) {
    if (auto it = memo.find(d); it != memo.end()) return it->second;
    const RuleData* r = rule_for(d);
    Fraction v;
    if (!r) {
      v.num = DiffPolynomial::of(d);
    } else if (d == r->lead) {
      v = reduce(r->rhs);
    } else {
      std::size_t step = 0;
      for (int i : ranking.indep_order()) {
        auto k = static_cast<std::size_t>(i);
        if (d.idx[k] > r->lead.idx[k]) {
          step = k;
          break;
        }
      }
      Derivative prev = d;
      --prev.idx[step];
      v = reduce(differentiate(value(prev), step));
    }
    memo.emplace(d, v);
    return v;
  }

  Signature sig;
  Ranking ranking;
  TermOrder order;
  std::vector<RuleData> rules;
  std::vector<DiffPolynomial> constraints;
  std::vector<std::vector<std::size_t>> by_dep;
  std::map<Derivative, Fraction> memo;
  std::set<DiffPolynomial> pivots;
  std::vector<DiffPolynomial> nonzero;
  mutable bool stripped = false;
};

namespace {

std::unique_ptr<Reducer::Impl> make_impl(const RifForm& form) {
  TermOrder order = form.ranking.term_order();
  std::vector<RuleData> rules;
  rules.reserve(form.rules.size());
  for (const auto& r : form.rules) rules.push_back({r.lead, from_expr(r.rhs, order)});
  return std::make_unique<Reducer::Impl>(form.signature, form.ranking, std::move(rules), form.constraints);
}

}  // namespace

Reducer::Reducer(const RifForm& form) : impl_(make_impl(form)) {}
Reducer::Reducer(Reducer&&) noexcept = default;
Reducer& Reducer::operator=(Reducer&&) noexcept = default;
Reducer::~Reducer() = default;

RationalExpr Reducer::reduce(const RationalExpr& e) { return to_expr(impl_->reduce(from_expr(e, impl_->order))); }

RationalExpr Reducer::value_of(const Derivative& d) { return to_expr(impl_->value(d)); }

bool Reducer::is_principal(const Derivative& d) const { return impl_->is_principal(d); }

std::vector<DiffPolynomial> Reducer::used_pivots() const {
  return std::vector<DiffPolynomial>(impl_->pivots.begin(), impl_->pivots.end());
}

Reduction reduce(const DiffPolynomial& p, const RifForm& f) {
  Reducer r(f);
  Reduction out;
  out.value = r.reduce(p);
  out.used_pivots = r.used_pivots();
  return out;
}

// ---------------------------------------------------------------------------
// Completion

namespace {

constexpr std::size_t kMaxSteps = 200000;

// An inconsistency that only holds under the assumption that some pivot is
// nonzero.
struct PivotContradiction : Error {
  using Error::Error;
};

class Completion {
 public:
  Completion(const SystemSource& src, const Ranking& ranking, int cap)
      : sig_(src.signature), ranking_(ranking), order_(ranking.term_order()) {
    int max_order = 0;
    for (const auto& eq : src.equations) max_order = std::max(max_order, eq.max_order());
    limit_ = max_order + cap;
    for (const auto& g : src.inequations) add_inequation(g);
    for (const auto& eq : src.equations) queue_.push_back(eq);
  }

  RifForm run() {
    for (;;) {
      while (!queue_.empty()) {
        if (++steps_ > kMaxSteps) {
          capped_ = true;
          queue_.clear();
          break;
        }
        DiffPolynomial p = std::move(queue_.front());
        queue_.pop_front();
        process(p);
      }
      check_pairs();
      if (queue_.empty()) break;
    }
    return finish();
  }

 private:
  struct RuleEntry {
    std::size_t id;
    Derivative lead;
    Fraction rhs;
    DiffPolynomial pivot;
  };

  Reducer::Impl& reducer() {
    if (!reducer_) {
      std::vector<RuleData> data;
      for (const auto& r : rules_) data.push_back({r.lead, r.rhs});
      reducer_ = std::make_unique<Reducer::Impl>(sig_, ranking_, std::move(data), constraints_);
      reducer_->nonzero = inequations_;
    }
    return *reducer_;
  }

  void invalidate() { reducer_.reset(); }

  void add_inequation(const DiffPolynomial& g) {
    if (g.is_constant()) return;
    for (const auto& [atom, e] : split_factors(g, order_).atoms) {
      (void)e;
      if (std::find(inequations_.begin(), inequations_.end(), atom) == inequations_.end()) {
        inequations_.push_back(atom);
        if (reducer_) reducer_->nonzero.push_back(atom);
      }
    }
  }

  DiffPolynomial equation_of(const RuleEntry& r) const {
    return expand_den(r.rhs) * DiffPolynomial::of(r.lead) - r.rhs.num;
  }

  void process(const DiffPolynomial& p) {
    Fraction f;
    f.num = p;
    reducer().stripped = false;
    f = reducer().reduce(std::move(f), true);
    const DiffPolynomial& num = f.num;
    if (num.is_zero()) return;
    if (!num.has_derivatives()) {
      if (reducer().stripped)
        throw PivotContradiction(ErrorCode::Inconsistent, "the system forces a pivot to vanish");
      throw Error(ErrorCode::Inconsistent, "the system implies a nonzero expression free of derivatives");
    }
    Derivative lead = leading_derivative(num, ranking_);
    if (lead.order() > limit_) {
      capped_ = true;
      return;
    }
    auto coeffs = num.coefficients(lead);
    if (coeffs.size() == 2) {
      add_rule(lead, coeffs[1], coeffs[0]);
    } else {
      add_constraint(normalize_sign_content(num, order_));
    }
  }

  void add_rule(const Derivative& lead, const DiffPolynomial& init, const DiffPolynomial& rest) {
    Factored fi = split_factors(init, order_);
    for (const auto& [atom, e] : fi.atoms) add_inequation(atom);
    Fraction rhs;
    rhs.num = -rest;
    rhs.scale = fi.scale;
    for (const auto& [atom, e] : fi.atoms) rhs.atoms[atom] += e;
    reducer().cancel(rhs);

    for (auto it = rules_.begin(); it != rules_.end();) {
      if (it->lead.is_derivative_of(lead)) {
        queue_.push_back(equation_of(*it));
        it = rules_.erase(it);
      } else {
        ++it;
      }
    }
    rules_.push_back({next_id_++, lead, std::move(rhs), normalize_sign_content(init, order_)});
    invalidate();

    std::vector<std::size_t> stale;
    for (std::size_t k = 0; k + 1 < rules_.size(); ++k)
      if (reducer().fraction_has_principal(rules_[k].rhs)) stale.push_back(k);
    for (std::size_t k : stale) {
      rules_[k].rhs = reducer().reduce(rules_[k].rhs);
      rules_[k].id = next_id_++;
    }
    if (!stale.empty()) invalidate();

    for (auto it = constraints_.begin(); it != constraints_.end();) {
      if (reducer().has_principal(*it)) {
        queue_.push_back(*it);
        it = constraints_.erase(it);
        invalidate();
      } else {
        ++it;
      }
    }
  }

  void add_constraint(const DiffPolynomial& c) {
    const Monomial lc = order_.leading_monomial(c);
    auto reducible = [&](const DiffPolynomial& g) {
      for (const auto& [m, coef] : g.terms())
        if (lc.divides(m)) return true;
      return false;
    };
    for (auto it = constraints_.begin(); it != constraints_.end();) {
      if (reducible(*it)) {
        queue_.push_back(*it);
        it = constraints_.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& g : constraints_)
      if (!order_.leading_monomial(g).coprime(lc)) queue_.push_back(s_polynomial(g, c, order_));
    constraints_.push_back(c);
    for (std::size_t i = 0; i < sig_.n_indep(); ++i) queue_.push_back(total_derivative(c, i));
    invalidate();

    bool changed = false;
    for (auto& r : rules_) {
      if (reducible(r.rhs.num)) {
        r.rhs = reducer().reduce(r.rhs);
        r.id = next_id_++;
        changed = true;
      }
    }
    if (changed) invalidate();
  }

  // Linear, constant coefficient, single dependent variable: the polynomial
  // product criterion applies.
  static bool plain_linear(const RuleEntry& r) {
    if (!r.rhs.atoms.empty()) return false;
    for (const auto& [m, c] : r.rhs.num.terms()) {
      if (!m.indep.empty() || m.factors.size() != 1 || m.factors[0].second != 1) return false;
      if (m.factors[0].first.dep != r.lead.dep) return false;
    }
    return true;
  }

  Fraction prolong(const RuleEntry& r, const Derivative& target) {
    Fraction f = r.rhs;
    for (std::size_t i = 0; i < target.idx.size(); ++i) {
      for (int k = r.lead.idx[i]; k < target.idx[i]; ++k) {
        Reducer::Impl& red = reducer();
        f = red.reduce(red.differentiate(f, i));
      }
    }
    return f;
  }

  void check_pairs() {
    for (std::size_t a = 0; a < rules_.size(); ++a) {
      for (std::size_t b = a + 1; b < rules_.size(); ++b) {
        const RuleEntry& ra = rules_[a];
        const RuleEntry& rb = rules_[b];
        if (ra.lead.dep != rb.lead.dep) continue;
        auto key = std::minmax(ra.id, rb.id);
        if (!done_pairs_.insert(key).second) continue;
        Derivative target = ra.lead;
        bool disjoint = true;
        for (std::size_t i = 0; i < target.idx.size(); ++i) {
          if (std::min(ra.lead.idx[i], rb.lead.idx[i]) > 0) disjoint = false;
          target.idx[i] = std::max(ra.lead.idx[i], rb.lead.idx[i]);
        }
        if (disjoint && plain_linear(ra) && plain_linear(rb)) continue;
        if (target.order() > limit_) {
          capped_ = true;
          continue;
        }
        Fraction diff = subtract(prolong(ra, target), prolong(rb, target));
        diff = reducer().reduce(std::move(diff), true);
        if (!diff.num.is_zero()) queue_.push_back(diff.num);
      }
    }
  }

  RifForm finish() {
    RifForm out;
    out.signature = sig_;
    out.ranking = ranking_;
    out.status = capped_ ? RifStatus::IterationCapped : RifStatus::Complete;
    std::sort(rules_.begin(), rules_.end(),
              [&](const RuleEntry& a, const RuleEntry& b) { return ranking_.less(b.lead, a.lead); });
    for (const auto& r : rules_) out.rules.push_back({r.lead, to_expr(r.rhs), r.pivot});
    out.constraints = constraints_;
    std::sort(out.constraints.begin(), out.constraints.end(), [&](const auto& a, const auto& b) {
      return order_.compare(order_.leading_monomial(a), order_.leading_monomial(b)) > 0;
    });
    std::vector<DiffPolynomial> ineqs;
    for (const auto& g : inequations_) {
      DiffPolynomial reduced = g;
      if (reducer().has_principal(g) || !constraints_.empty()) {
        Fraction f;
        f.num = g;
        reduced = reducer().reduce(std::move(f)).num;
      }
      if (reduced.is_zero()) throw PivotContradiction(ErrorCode::Inconsistent, "a pivot vanishes identically on the system");
      if (reduced.is_constant()) continue;
      for (const auto& [atom, e] : split_factors(reduced, order_).atoms) {
        (void)e;
        if (std::find(ineqs.begin(), ineqs.end(), atom) == ineqs.end()) ineqs.push_back(atom);
      }
    }
    out.inequations = ineqs;
    return out;
  }

  Signature sig_;
  Ranking ranking_;
  TermOrder order_;
  int limit_ = 0;
  std::vector<RuleEntry> rules_;
  std::vector<DiffPolynomial> constraints_;
  std::vector<DiffPolynomial> inequations_;
  std::deque<DiffPolynomial> queue_;
  std::set<std::pair<std::size_t, std::size_t>> done_pairs_;
  std::unique_ptr<Reducer::Impl> reducer_;
  std::size_t next_id_ = 0;
  std::size_t steps_ = 0;
  bool capped_ = false;
};

}  // namespace

RifForm rif(const SystemSource& src, const Ranking& r, int prolongation_cap) {
  if (src.equations.empty()) throw Error(ErrorCode::Syntax, "empty system");
  return Completion(src, r, prolongation_cap).run();
}

PivotVerdict probe_pivot_case(const SystemSource& src, const DiffPolynomial& pivot, const Ranking& r,
                              int prolongation_cap) {
  SystemSource branch = src;
  branch.equations.insert(branch.equations.begin(), pivot);
  try {
    RifForm f = rif(branch, r, prolongation_cap);
    return f.status == RifStatus::IterationCapped ? PivotVerdict::Unknown : PivotVerdict::Consistent;
  } catch (const PivotContradiction&) {
    return PivotVerdict::Unknown;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Inconsistent) return PivotVerdict::Inconsistent;
    return PivotVerdict::Unknown;
  }
}

}  // namespace pde2ode
