#include "pde2ode/dae.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/render.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace pde2ode {
namespace {

/// A polynomial in states and independent variables prepared for fast
/// floating-point evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const DiffPolynomial& p) {
    for (const auto& [m, c] : p.terms()) {
      Term t;
      t.coeff = c.get_d();
      for (const auto& [d, e] : m.factors) t.states.emplace_back(static_cast<std::size_t>(d.dep), e);
      for (const auto& [var, e] : m.indep) t.indep.emplace_back(static_cast<std::size_t>(var), e);
      terms_.push_back(std::move(t));
    }
  }

  double operator()(const std::vector<double>& x, const std::vector<double>& v) const {
    double total = 0;
    for (const auto& t : terms_) {
      double r = t.coeff;
      for (const auto& [k, e] : t.states) r *= std::pow(v[k], e);
      for (const auto& [k, e] : t.indep) r *= std::pow(x[k], e);
      total += r;
    }
    return total;
  }

 private:
  struct Term {
    double coeff = 0;
    std::vector<std::pair<std::size_t, int>> states;
    std::vector<std::pair<std::size_t, int>> indep;
  };
  std::vector<Term> terms_;
};

struct CompiledExpr {
  CompiledPoly num;
  CompiledPoly den;
  bool polynomial = true;
  double den_const = 1;

  explicit CompiledExpr(const RationalExpr& e) : num(e.num()), den(e.den()) {
    polynomial = e.den().is_constant();
    if (polynomial) den_const = e.den().constant_term().get_d();
  }
  double operator()(const std::vector<double>& x, const std::vector<double>& v) const {
    return num(x, v) / (polynomial ? den_const : den(x, v));
  }
};

class CompiledSystem {
 public:
  explicit CompiledSystem(const ParametricOdeSystem& p) : p_(p) {
    for (const auto& sys : p.odes) {
      rhs_.emplace_back();
      for (const auto& f : sys) rhs_.back().emplace_back(f);
    }
    for (const auto& h : p.constraints) {
      constraints_.emplace_back(h);
      jacobian_.emplace_back();
      for (std::size_t r = 0; r < p.n_states(); ++r) jacobian_.back().emplace_back(partial(h, p.state(r)));
    }
    for (const auto& g : p.inequations) pivots_.emplace_back(g);
  }

  std::vector<double> field(const std::vector<double>& x, const std::vector<double>& v,
                            const std::vector<double>& d) const {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 0) continue;
      for (std::size_t k = 0; k < v.size(); ++k) out[k] += d[i] * rhs_[i][k](x, v);
    }
    return out;
  }

  double drift(const std::vector<double>& x, const std::vector<double>& v) const {
    double worst = 0;
    for (const auto& h : constraints_) worst = std::max(worst, std::abs(h(x, v)));
    return worst;
  }

  std::vector<double> pivot_values(const std::vector<double>& x, const std::vector<double>& v) const {
    std::vector<double> out;
    for (const auto& g : pivots_) out.push_back(g(x, v));
    return out;
  }

  double margin(const std::vector<double>& x, const std::vector<double>& v) const {
    double m = std::numeric_limits<double>::infinity();
    for (double g : pivot_values(x, v)) m = std::min(m, std::abs(g));
    return m;
  }

  /// Gauss-Newton steps v <- v - J^T (J J^T)^{-1} h.
  void project(const std::vector<double>& x, std::vector<double>& v) const {
    const auto q = static_cast<Eigen::Index>(constraints_.size());
    if (q == 0) return;
    const auto m = static_cast<Eigen::Index>(v.size());
    auto residual = [&](Eigen::VectorXd& h) {
      h.resize(q);
      for (Eigen::Index a = 0; a < q; ++a) h(a) = constraints_[static_cast<std::size_t>(a)](x, v);
    };
    Eigen::VectorXd h;
    residual(h);
    for (int it = 0; it < 5 && h.lpNorm<Eigen::Infinity>() >= 1e-12; ++it) {
      Eigen::MatrixXd j(q, m);
      for (Eigen::Index a = 0; a < q; ++a)
        for (Eigen::Index r = 0; r < m; ++r)
          j(a, r) = jacobian_[static_cast<std::size_t>(a)][static_cast<std::size_t>(r)](x, v);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(j * j.transpose());
      if (lu.rank() < q) throw Error(ErrorCode::ProjectFail, "constraint Jacobian is rank deficient");
      Eigen::VectorXd step = j.transpose() * lu.solve(h);
      for (Eigen::Index r = 0; r < m; ++r) v[static_cast<std::size_t>(r)] -= step(r);
      residual(h);
    }
    double left = h.lpNorm<Eigen::Infinity>();
    if (!(left <= 1e-6)) {
      std::ostringstream os;
      os << "projection stalled with constraint residual " << left;
      throw Error(ErrorCode::ProjectFail, os.str());
    }
  }

  const ParametricOdeSystem& system() const { return p_; }

 private:
  const ParametricOdeSystem& p_;
  std::vector<std::vector<CompiledExpr>> rhs_;
  std::vector<CompiledPoly> constraints_;
  std::vector<std::vector<CompiledPoly>> jacobian_;
  std::vector<CompiledPoly> pivots_;
};

std::vector<double> point_on(const std::vector<double>& x0, const std::vector<double>& d, double t) {
  std::vector<double> x = x0;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * d[i];
  return x;
}

std::vector<double> axpy(const std::vector<double>& v, double a, const std::vector<double>& k) {
  std::vector<double> out = v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * k[i];
  return out;
}

void check_pivots(const CompiledSystem& sys, const std::vector<double>& x, const std::vector<double>& v,
                  const std::vector<double>& start_values, double guard, double t) {
  std::vector<double> g = sys.pivot_values(x, v);
  for (std::size_t k = 0; k < g.size(); ++k) {
    bool flipped = (g[k] > 0) != (start_values[k] > 0);
    if (std::abs(g[k]) < guard || flipped || !std::isfinite(g[k])) {
      std::ostringstream os;
      os << "pivot " << render(sys.system().inequations[k], sys.system().state_signature, DerivativeStyle::Compact)
         << " reaches " << g[k] << " near t=" << t;
      throw Error(ErrorCode::Pivot, os.str());
    }
  }
}

/// One RK4 step with pivot checks at every stage.
std::vector<double> rk4_step(const CompiledSystem& sys, const std::vector<double>& x0, const std::vector<double>& d,
                             double t, double h, const std::vector<double>& v, double guard) {
  std::vector<double> start = sys.pivot_values(point_on(x0, d, t), v);
  auto stage = [&](double tt, const std::vector<double>& vv) {
    std::vector<double> x = point_on(x0, d, tt);
    check_pivots(sys, x, vv, start, guard, tt);
    return sys.field(x, vv, d);
  };
  std::vector<double> k1 = stage(t, v);
  std::vector<double> k2 = stage(t + h / 2, axpy(v, h / 2, k1));
  std::vector<double> k3 = stage(t + h / 2, axpy(v, h / 2, k2));
  std::vector<double> k4 = stage(t + h, axpy(v, h, k3));
  std::vector<double> out = v;
  for (std::size_t k = 0; k < v.size(); ++k) out[k] += h / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
  check_pivots(sys, point_on(x0, d, t + h), out, start, guard, t + h);
  for (double q : out)
    if (!std::isfinite(q)) throw Error(ErrorCode::ProjectFail, "state became non-finite");
  return out;
}

void require_sizes(const ParametricOdeSystem& p, const std::vector<double>& x, const std::vector<double>& v) {
  if (x.size() != p.n_indep()) throw Error(ErrorCode::Usage, "point has the wrong number of coordinates");
  if (v.size() != p.n_states()) throw Error(ErrorCode::Usage, "state vector has the wrong length");
}

}  // namespace

PointCheck check_consistent_point(const ParametricOdeSystem& p, const std::vector<double>& x0,
                                  const std::vector<double>& v0, double tol, double guard) {
  require_sizes(p, x0, v0);
  PointCheck out;
  const auto& sig = p.state_signature;
  for (const auto& h : p.constraints) {
    double val = CompiledPoly(h)(x0, v0);
    out.max_constraint = std::max(out.max_constraint, std::abs(val));
    if (!(std::abs(val) <= tol)) {
      std::ostringstream os;
      os << "constraint " << render(h, sig, DerivativeStyle::Compact) << " = " << val;
      out.violations.push_back(os.str());
    }
  }
  for (const auto& g : p.inequations) {
    double val = CompiledPoly(g)(x0, v0);
    out.min_pivot = std::min(out.min_pivot, std::abs(val));
    if (!(std::abs(val) >= guard)) {
      std::ostringstream os;
      os << "pivot " << render(g, sig, DerivativeStyle::Compact) << " = " << val;
      out.violations.push_back(os.str());
    }
  }
  out.ok = out.violations.empty();
  return out;
}

Trajectory integrate_along_curve(const ParametricOdeSystem& p, const CurveSpec& c, const std::vector<double>& v0,
                                 const IntegrateOptions& opt) {
  require_sizes(p, c.start, v0);
  if (c.direction.size() != p.n_indep()) throw Error(ErrorCode::Usage, "direction has the wrong number of coordinates");
  double norm = 0;
  for (double d : c.direction) norm += d * d;
  if (norm == 0) throw Error(ErrorCode::Usage, "direction must be nonzero");
  if (!(c.h > 0) || c.steps < 1) throw Error(ErrorCode::Usage, "step size must be positive and steps at least 1");
  PointCheck start = check_consistent_point(p, c.start, v0, opt.tol, opt.guard);
  if (!start.ok) {
    std::string msg = "inconsistent starting point:";
    for (const auto& v : start.violations) msg += " " + v + ";";
    bool pivot = start.min_pivot < opt.guard;
    throw Error(pivot ? ErrorCode::Pivot : ErrorCode::Inconsistent, msg);
  }

  CompiledSystem sys(p);
  Trajectory traj;
  traj.indep_names = p.state_signature.indep_names;
  traj.state_names = p.state_names();
  std::vector<double> v = v0;
  auto record = [&](double t) {
    Sample s;
    s.t = t;
    s.x = point_on(c.start, c.direction, t);
    s.v = v;
    s.drift = sys.drift(s.x, v);
    s.pivot_margin = sys.margin(s.x, v);
    traj.samples.push_back(std::move(s));
  };
  record(0);
  for (int n = 0; n < c.steps; ++n) {
    double t = n * c.h;
    v = rk4_step(sys, c.start, c.direction, t, c.h, v, opt.guard);
    if (opt.project) sys.project(point_on(c.start, c.direction, t + c.h), v);
    record((n + 1) * c.h);
  }
  return traj;
}

double check_flow_commutativity(const ParametricOdeSystem& p, const std::vector<double>& x0,
                                const std::vector<double>& v0, double h, std::size_t i, std::size_t j,
                                const IntegrateOptions& opt) {
  const std::size_t n = p.n_indep();
  if (n < 2 || i >= n || j >= n || i == j) throw Error(ErrorCode::Usage, "two distinct independent variables are required");
  auto unit = [&](std::size_t k) {
    std::vector<double> d(n, 0.0);
    d[k] = 1;
    return d;
  };
  auto two_steps = [&](std::size_t a, std::size_t b) {
    CurveSpec first{x0, unit(a), h, 1};
    Trajectory t1 = integrate_along_curve(p, first, v0, opt);
    CurveSpec second{t1.samples.back().x, unit(b), h, 1};
    return integrate_along_curve(p, second, t1.samples.back().v, opt).samples.back().v;
  };
  std::vector<double> ab = two_steps(i, j);
  std::vector<double> ba = two_steps(j, i);
  double worst = 0;
  for (std::size_t k = 0; k < ab.size(); ++k) worst = std::max(worst, std::abs(ab[k] - ba[k]));
  return worst;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t";
  for (const auto& n : t.indep_names) os << "," << n;
  for (const auto& n : t.state_names) os << "," << n;
  os << ",max_drift,min_pivot\n";
  for (const auto& s : t.samples) {
    os << s.t;
    for (double x : s.x) os << "," << x;
    for (double v : s.v) os << "," << v;
    os << "," << s.drift << ",";
    if (std::isfinite(s.pivot_margin)) os << s.pivot_margin;
    os << "\n";
  }
  return os.str();
}

}  // namespace pde2ode
