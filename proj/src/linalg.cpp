#include "pde2ode/linalg.hpp"

#include "pde2ode/error.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace pde2ode {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& o) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

RationalMatrix& RationalMatrix::operator-=(const RationalMatrix& o) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

RationalMatrix& RationalMatrix::operator*=(const Rational& c) {
  for (auto& q : data_) q *= c;
  return *this;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) out(i, j) += aik * b(k, j);
    }
  return out;
}

namespace {

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(row, c));
    Rational inv = 1 / a(row, col);
    for (std::size_t c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      Rational m = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c)
        if (a(row, c) != 0) a(r, c) -= m * a(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(RationalMatrix a) { return rref(a).size(); }

RationalMatrix nullspace(const RationalMatrix& a) {
  RationalMatrix r = a;
  std::vector<std::size_t> pivots = rref(r);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  RationalMatrix out(a.cols(), a.cols() - pivots.size());
  std::size_t k = 0;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    out(free, k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) out(pivots[i], k) = -r(i, free);
    ++k;
  }
  return out;
}

Rational trace(const RationalMatrix& a) {
  Rational t = 0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<Rational> c = c_;
  Rational lc = c.back();
  for (auto& q : c) q /= lc;
  return UPoly(c);
}

UPoly UPoly::derivative() const {
  std::vector<Rational> c;
  for (std::size_t k = 1; k < c_.size(); ++k) c.push_back(c_[k] * static_cast<long>(k));
  return UPoly(c);
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(c);
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return UPoly(c);
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivZero, "polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  const auto& d = b.coeffs();
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rational> q(r.size() - d.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    Rational f = r[k + d.size() - 1] / d.back();
    q[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) r[k + j] -= f * d[j];
  }
  return {UPoly(q), UPoly(r)};
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
  std::vector<UPoly> out;
  UPoly f = p.monic();
  if (f.degree() <= 0) return out;
  UPoly a = gcd(f, f.derivative());
  UPoly b = divmod(f, a).first;
  UPoly c = divmod(f.derivative(), a).first;
  UPoly d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly s = gcd(b, d);
    out.push_back(s);
    b = divmod(b, s).first;
    c = divmod(d, s).first;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

UPoly characteristic_polynomial(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  RationalMatrix h = a;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t p = j + 1;
    while (p < n && h(p, j) == 0) ++p;
    if (p == n) continue;
    if (p != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(h(p, c), h(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(h(r, p), h(r, j + 1));
    }
    for (std::size_t r = j + 2; r < n; ++r) {
      if (h(r, j) == 0) continue;
      Rational m = h(r, j) / h(j + 1, j);
      for (std::size_t c = 0; c < n; ++c)
        if (h(j + 1, c) != 0) h(r, c) -= m * h(j + 1, c);
      for (std::size_t rr = 0; rr < n; ++rr)
        if (h(rr, r) != 0) h(rr, j + 1) += m * h(rr, r);
    }
  }
  // p_k = (t - h_kk) p_{k-1} - sum_i h_{k-i,k} (prod_j h_{j,j-1}) p_{k-i-1}
  std::vector<UPoly> polys{UPoly({Rational(1)})};
  for (std::size_t k = 0; k < n; ++k) {
    UPoly next = UPoly({-h(k, k), Rational(1)}) * polys[k];
    Rational prod = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      prod *= h(k - i + 1, k - i);
      if (prod == 0) break;
      Rational coef = h(k - i, k) * prod;
      if (coef != 0) next = next - UPoly({coef}) * polys[k - i];
    }
    polys.push_back(next);
  }
  return polys.back();
}

RationalMatrix evaluate(const UPoly& p, const RationalMatrix& a) {
  const std::size_t n = a.rows();
  RationalMatrix acc(n, n);
  const auto& c = p.coeffs();
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = acc * a;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += c[k];
  }
  return acc;
}

namespace {

/// Diagonal similarity scaling by powers of two that equalizes row and
/// column norms (Parlett and Reinsch).
void balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      double f = 1, s = c + r;
      while (c < r / 2) {
        c *= 2;
        r /= 2;
        f *= 2;
      }
      while (c >= r * 2) {
        c /= 2;
        r *= 2;
        f /= 2;
      }
      if ((c + r) < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> roots(const UPoly& p) {
  const int d = p.degree();
  if (d <= 0) return {};
  UPoly m = p.monic();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -m.coeffs()[static_cast<std::size_t>(i)].get_d();
  balance(comp);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenFail, "companion eigenvalues did not converge");
  using C = std::complex<long double>;
  std::vector<C> coeffs;
  for (const auto& q : m.coeffs()) coeffs.emplace_back(static_cast<long double>(q.get_d()));
  // Long double coefficients from the exact rationals keep the polish accurate.
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    mpf_class f(m.coeffs()[k], 128);
    long double hi = static_cast<long double>(f.get_d());
    mpf_class rest = f - mpf_class(static_cast<double>(hi), 128);
    coeffs[k] = C(hi + static_cast<long double>(rest.get_d()));
  }
  std::vector<std::complex<double>> out;
  for (int i = 0; i < d; ++i) {
    C z(solver.eigenvalues()(i).real(), solver.eigenvalues()(i).imag());
    for (int it = 0; it < 8; ++it) {
      C val = 0, der = 0;
      for (std::size_t k = coeffs.size(); k-- > 0;) {
        der = der * z + val;
        val = val * z + coeffs[k];
      }
      if (std::abs(der) == 0.0L) break;
      C step = val / der;
      z -= step;
      if (std::abs(step) <= 1e-18L * std::max(1.0L, std::abs(z))) break;
    }
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace pde2ode
