#pragma once

// Rankings, reduction modulo a solved form, and the generic-case completion
// that brings a polynomial PDE system into solved form (rules + constraints
// + pivot inequations).

#include "pde2ode/algebra.hpp"
#include "pde2ode/diffpoly.hpp"
#include "pde2ode/parser.hpp"

#include <compare>
#include <memory>
#include <vector>

namespace pde2ode {

/// Orderly ranking: total order first, then the multi-index compared
/// lexicographically along `indep_order` (more differentiations in an earlier
/// variable rank higher), then the position of the dependent variable in
/// `dep_order` (later ranks higher).
class Ranking {
 public:
  Ranking() = default;
  Ranking(std::vector<int> indep_order, std::vector<int> dep_order);

  /// Declared variable orders.
  static Ranking grlex(const Signature& sig);

  std::strong_ordering compare(const Derivative& a, const Derivative& b) const;
  bool less(const Derivative& a, const Derivative& b) const { return compare(a, b) < 0; }

  /// Lexicographic term order in which variables are compared by this ranking.
  TermOrder term_order() const;

  const std::vector<int>& indep_order() const { return indep_order_; }
  const std::vector<int>& dep_order() const { return dep_order_; }

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<int> indep_order_;
  std::vector<int> dep_order_;
  std::vector<int> dep_rank_;
};

/// Ordering used when listing derivatives to a reader: by order, then with
/// earlier independent variables first (u_x before u_y), then by dependent
/// variable position.
bool listing_less(const Derivative& a, const Derivative& b, const Ranking& r);

/// The highest ranked derivative of p; E_NO_DERIVATIVE if there is none.
Derivative leading_derivative(const DiffPolynomial& p, const Ranking& r);

/// A solved equation lead = rhs, obtained by dividing by `pivot`.
struct Rule {
  Derivative lead;
  RationalExpr rhs;
  DiffPolynomial pivot;
};

enum class RifStatus { Complete, IterationCapped };

struct RifForm {
  Signature signature;
  Ranking ranking;
  std::vector<Rule> rules;                   // highest lead first
  std::vector<DiffPolynomial> constraints;   // leading-nonlinear, "= 0"
  std::vector<DiffPolynomial> inequations;   // "!= 0"
  RifStatus status = RifStatus::Complete;
};

struct Reduction {
  RationalExpr value;
  std::vector<DiffPolynomial> used_pivots;
};

/// Reduction engine for a fixed solved form. Values of principal derivatives
/// are memoized, so one instance should be reused for many reductions against
/// the same form. Not safe for concurrent use; create one per thread.
class Reducer {
 public:
  explicit Reducer(const RifForm& form);
  Reducer(const Reducer&) = delete;
  Reducer& operator=(const Reducer&) = delete;
  Reducer(Reducer&&) noexcept;
  Reducer& operator=(Reducer&&) noexcept;
  ~Reducer();

  /// Normal form: every principal derivative is replaced (through the
  /// appropriate total derivative of its rule), the numerator is reduced
  /// modulo the constraints and common pivot factors are cancelled.
  RationalExpr reduce(const RationalExpr& e);
  RationalExpr reduce(const DiffPolynomial& p) { return reduce(RationalExpr(p)); }

  /// Normal form of a principal derivative (or the derivative itself).
  RationalExpr value_of(const Derivative& d);

  bool is_principal(const Derivative& d) const;

  /// Pivot factors that appeared in denominators so far.
  std::vector<DiffPolynomial> used_pivots() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

Reduction reduce(const DiffPolynomial& p, const RifForm& f);

/// Generic-case completion. Throws E_INCONSISTENT when a nonzero expression
/// free of derivatives follows from the system. When a created equation would
/// exceed the highest input order by more than `prolongation_cap`, the
/// equation is dropped and the result is flagged IterationCapped.
RifForm rif(const SystemSource& src, const Ranking& r, int prolongation_cap = 4);
inline RifForm rif(const SystemSource& src, int prolongation_cap = 4) {
  return rif(src, Ranking::grlex(src.signature), prolongation_cap);
}

enum class PivotVerdict { Consistent, Inconsistent, Unknown };
const char* to_string(PivotVerdict v);

/// Adds pivot = 0 to the system and completes once more (no nested probes).
PivotVerdict probe_pivot_case(const SystemSource& src, const DiffPolynomial& pivot, const Ranking& r,
                              int prolongation_cap = 4);

}  // namespace pde2ode
