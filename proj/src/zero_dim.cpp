#include "pde2ode/zero_dim.hpp"

#include "pde2ode/error.hpp"
#include "pde2ode/render.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

namespace pde2ode {

SystemSource poly_to_diff(const SystemSource& polys) {
  if (polys.signature.n_dep() != 0)
    throw Error(ErrorCode::Usage, "a polynomial system must not declare functions");
  SystemSource out;
  out.signature.indep_names = polys.signature.indep_names;
  out.signature.dep_names = {"u"};
  const std::size_t n = out.signature.n_indep();
  for (const auto& p : polys.equations) {
    DiffPolynomial q;
    for (const auto& [m, c] : p.terms()) {
      std::vector<int> idx(n, 0);
      for (const auto& [v, e] : m.indep) idx[static_cast<std::size_t>(v)] = e;
      q.add_term(Monomial::of(Derivative(0, idx)), c);
    }
    out.equations.push_back(q);
  }
  out.options = polys.options;
  return out;
}

MultiplicationSystem build_multiplication_matrices(const ParametricOdeSystem& p) {
  if (!p.constraints.empty()) throw Error(ErrorCode::NotLinear, "the ODE system carries nonlinear constraints");
  MultiplicationSystem ms;
  ms.basis = p.sources;
  ms.basis_names = p.state_names();
  const std::size_t m = p.n_states();
  for (std::size_t i = 0; i < p.n_indep(); ++i) {
    RationalMatrix x(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      const RationalExpr& f = p.odes[i][k];
      if (!f.den().is_constant())
        throw Error(ErrorCode::NotLinear, "right-hand side of " + p.state_names()[k] + " is not polynomial");
      Rational den = f.den().constant_term();
      for (const auto& [mono, c] : f.num().terms()) {
        if (!mono.indep.empty() || mono.factors.size() != 1 || mono.factors[0].second != 1)
          throw Error(ErrorCode::NotLinear,
                      "right-hand side of " + p.state_names()[k] + " is not linear homogeneous with constant coefficients");
        x(k, static_cast<std::size_t>(mono.factors[0].first.dep)) = c / den;
      }
    }
    ms.matrices.push_back(std::move(x));
  }
  for (std::size_t i = 0; i < ms.matrices.size(); ++i)
    for (std::size_t j = i + 1; j < ms.matrices.size(); ++j)
      if (ms.matrices[i] * ms.matrices[j] != ms.matrices[j] * ms.matrices[i])
        throw Error(ErrorCode::NotCommuting, "multiplication matrices " + std::to_string(i + 1) + " and " +
                                                 std::to_string(j + 1) + " do not commute");
  return ms;
}

MultiplicationSystem multiplication_system_for(const SystemSource& polys, int prolongation_cap) {
  RifForm f = rif(poly_to_diff(polys), prolongation_cap);
  return build_multiplication_matrices(reduce_to_parametric_ode(f));
}

namespace {

using Eigen::MatrixXcd;

MatrixXcd to_complex(const RationalMatrix& a) {
  MatrixXcd out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c).get_d();
  return out;
}

/// Orthonormal basis of the column span of an exact full-rank matrix.
MatrixXcd orthonormal_columns(const RationalMatrix& b) {
  MatrixXcd d(static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
  for (std::size_t c = 0; c < b.cols(); ++c) {
    Rational scale = 0;
    for (std::size_t r = 0; r < b.rows(); ++r) scale = std::max(scale, Rational(abs(b(r, c))));
    for (std::size_t r = 0; r < b.rows(); ++r)
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Rational(b(r, c) / scale).get_d();
  }
  Eigen::HouseholderQR<MatrixXcd> qr(d);
  return qr.householderQ() * MatrixXcd::Identity(d.rows(), d.cols());
}

double residual_of(const SystemSource& polys, const std::vector<std::complex<double>>& x) {
  double worst = 0;
  for (const auto& p : polys.equations) {
    auto v = evaluate_poly<std::complex<double>>(
        p, [](const Derivative&) -> std::complex<double> { throw Error(ErrorCode::UnknownSymbol, "unexpected function"); },
        [&](int var) { return x.at(static_cast<std::size_t>(var)); });
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

std::optional<RootSet> attempt(const MultiplicationSystem& ms, const SystemSource& polys, const SolveOptions& opt,
                               std::mt19937_64& rng) {
  const std::size_t n = ms.matrices.size();
  const std::size_t m = ms.dimension();
  RootSet out;
  std::uniform_int_distribution<int> dist(1, 99);
  std::bernoulli_distribution negative(0.5);
  RationalMatrix combo(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    Rational c = dist(rng) * (negative(rng) ? -1 : 1);
    out.combination.push_back(c);
    combo += ms.matrices[i] * c;
  }
  std::vector<MatrixXcd> xs;
  for (const auto& x : ms.matrices) xs.push_back(to_complex(x));
  MatrixXcd mc = to_complex(combo);

  std::vector<UPoly> classes = squarefree_decomposition(characteristic_polynomial(combo));
  std::vector<Root> found;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const UPoly& s = classes[k];
    if (s.degree() <= 0) continue;
    RationalMatrix kernel = nullspace(evaluate(s, combo));
    const auto w = static_cast<Eigen::Index>(kernel.cols());
    if (w == 0) return std::nullopt;
    MatrixXcd q = orthonormal_columns(kernel);
    MatrixXcd cm = q.adjoint() * mc * q;
    std::vector<MatrixXcd> cx;
    for (const auto& x : xs) cx.push_back(q.adjoint() * x * q);
    double threshold = 1e-7 * std::max(1.0, cm.norm());
    Eigen::Index total = 0;
    for (const auto& lambda : roots(s)) {
      MatrixXcd shifted = cm - lambda * MatrixXcd::Identity(w, w);
      Eigen::JacobiSVD<MatrixXcd> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      Eigen::Index dim = 0;
      for (Eigen::Index r = 0; r < sv.size(); ++r)
        if (sv(r) < threshold) ++dim;
      if (dim == 0) return std::nullopt;
      total += dim;
      MatrixXcd v = svd.matrixV().rightCols(dim);
      Root root;
      root.multiplicity = static_cast<int>(k + 1);
      for (std::size_t i = 0; i < n; ++i) root.coords.push_back((v.adjoint() * cx[i] * v).trace() / static_cast<double>(dim));
      root.residual = residual_of(polys, root.coords);
      if (!(root.residual < opt.tol)) return std::nullopt;
      found.push_back(std::move(root));
    }
    if (total != w) return std::nullopt;
  }

  const double merge = 10 * opt.tol;
  for (auto& r : found) {
    bool merged = false;
    for (auto& kept : out.roots) {
      bool same = true;
      for (std::size_t i = 0; i < n && same; ++i) same = std::abs(kept.coords[i] - r.coords[i]) <= merge;
      if (same) {
        kept.multiplicity += r.multiplicity;
        kept.residual = std::max(kept.residual, r.residual);
        merged = true;
        break;
      }
    }
    if (!merged) out.roots.push_back(r);
  }
  for (auto& r : out.roots)
    for (auto& z : r.coords) {
      if (std::abs(z.real()) < 1e-14) z.real(0.0);
      if (std::abs(z.imag()) < 1e-14) z.imag(0.0);
    }
  std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
    if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
      double ar = std::round(a.coords[i].real() * 1e9), br = std::round(b.coords[i].real() * 1e9);
      if (ar != br) return ar < br;
      double ai = std::round(a.coords[i].imag() * 1e9), bi = std::round(b.coords[i].imag() * 1e9);
      if (ai != bi) return ai < bi;
    }
    return false;
  });
  return out;
}

}  // namespace

RootSet solve_zero_dim(const MultiplicationSystem& ms, const SystemSource& polys, const SolveOptions& opt) {
  if (ms.dimension() == 0) return {};
  std::mt19937_64 rng(opt.seed);
  for (int tries = 0; tries < 2; ++tries)
    if (auto r = attempt(ms, polys, opt, rng)) return *r;
  throw Error(ErrorCode::EigenFail, "eigenvalue splitting failed for two random combinations");
}

}  // namespace pde2ode
