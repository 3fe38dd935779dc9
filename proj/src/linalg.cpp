#include "opdyn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "opdyn/errors.hpp"

namespace opdyn {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
  if (rows.empty()) throw ConstructionError("matrix needs at least one row");
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.c_) throw ConstructionError("matrix rows have different lengths");
    for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = checked(rows[i][j], "matrix entry");
  }
  return m;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

std::vector<Complex> DenseMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != c_) throw DomainError("matrix-vector size mismatch");
  std::vector<Complex> y(r_);
  for (std::size_t i = 0; i < r_; ++i) {
    Complex acc{};
    const Complex* row = &a_[i * c_];
    for (std::size_t j = 0; j < c_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

double DenseMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double DenseMatrix::norm1() const {
  double best = 0.0;
  for (std::size_t j = 0; j < c_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < r_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  if (r_ != o.r_ || c_ != o.c_) throw DomainError("matrix shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  if (r_ != o.r_ || c_ != o.c_) throw DomainError("matrix shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(Complex s) {
  for (auto& z : a_) z *= s;
  return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.c_ != b.r_) throw DomainError("matrix product shape mismatch");
  DenseMatrix m(a.r_, b.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t k = 0; k < a.c_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

namespace {

double vec_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double power_iterate(const DenseMatrix& a, const DenseMatrix& ah, std::vector<Complex> v) {
  double est = 0.0;
  for (int it = 0; it < 10'000; ++it) {
    auto w = a.apply(v);
    const double next = vec_norm(w);
    auto u = ah.apply(w);
    const double un = vec_norm(u);
    if (un == 0.0) return next;
    if (it > 0 && std::abs(next - est) <= 1e-12 * next) return next;
    est = next;
    for (auto& z : u) z /= un;
    v = std::move(u);
  }
  return est;
}

}  // namespace

double largest_singular_value(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const DenseMatrix ah = a.adjoint();
  const std::size_t n = a.cols();
  std::vector<Complex> ones(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  double best = power_iterate(a, ah, ones);
  // Second start from the heaviest column guards against a start vector
  // orthogonal to the top singular direction.
  std::size_t jmax = 0;
  double cmax = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
    if (s > cmax) {
      cmax = s;
      jmax = j;
    }
  }
  if (cmax > 0.0) {
    std::vector<Complex> e(n);
    e[jmax] = 1.0;
    best = std::max(best, power_iterate(a, ah, e));
  }
  return best;
}

namespace {

struct LU {
  DenseMatrix m;
  std::vector<std::size_t> perm;
};

LU factor(const DenseMatrix& a) {
  if (!a.square()) throw DomainError("LU needs a square matrix");
  const std::size_t n = a.rows();
  LU lu{a, std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) lu.perm[i] = i;
  auto& m = lu.m;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        p = i;
      }
    if (best == 0.0 || !std::isfinite(best)) throw SingularMatrixError("matrix is singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      std::swap(lu.perm[k], lu.perm[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) / m(k, k);
      m(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return lu;
}

std::vector<Complex> lu_solve(const LU& lu, std::span<const Complex> b) {
  const std::size_t n = lu.m.rows();
  std::vector<Complex> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[lu.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu.m(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu.m(i, j) * y[j];
    y[i] = s / lu.m(i, i);
  }
  return y;
}

}  // namespace

std::vector<Complex> solve(const DenseMatrix& a, std::span<const Complex> b) {
  if (b.size() != a.rows()) throw DomainError("right-hand side size mismatch");
  return lu_solve(factor(a), b);
}

DenseMatrix inverse(const DenseMatrix& a) {
  const LU lu = factor(a);
  const std::size_t n = a.rows();
  DenseMatrix inv(n, n);
  std::vector<Complex> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), Complex{});
    e[j] = 1.0;
    auto col = lu_solve(lu, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

DenseMatrix matrix_power(const DenseMatrix& a, std::int64_t n) {
  if (!a.square()) throw DomainError("matrix power needs a square matrix");
  if (n < 0) throw ParameterError("matrix power needs n >= 0");
  DenseMatrix result = DenseMatrix::identity(a.rows());
  DenseMatrix base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

DenseMatrix expm(const DenseMatrix& a) {
  if (!a.square()) throw DomainError("expm needs a square matrix");
  const double nrm = a.norm1();
  int s = 0;
  if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  DenseMatrix b = a;
  b *= Complex(std::ldexp(1.0, -s), 0.0);
  DenseMatrix sum = DenseMatrix::identity(a.rows());
  DenseMatrix term = sum;
  for (int k = 1; k <= 100; ++k) {
    term = term * b;
    term *= Complex(1.0 / k, 0.0);
    sum += term;
    if (term.norm1() <= 1e-14 * sum.norm1()) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

}  // namespace opdyn
