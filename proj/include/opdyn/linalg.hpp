#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "opdyn/core.hpp"

namespace opdyn {

// Row-major dense complex matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<Complex>>& rows);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }
  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  std::span<const Complex> data() const { return a_; }

  DenseMatrix adjoint() const;
  std::vector<Complex> apply(std::span<const Complex> x) const;
  double frobenius() const;
  double norm1() const;

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(Complex s);
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(Complex s, DenseMatrix a) { return a *= s; }
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Complex> a_;
};

// Power iteration on A*A from the normalized all-ones vector; relative
// tolerance 1e-12, at most 10^4 iterations.
double largest_singular_value(const DenseMatrix& a);

// Solves A x = b with partial pivoting; throws SingularMatrixError.
std::vector<Complex> solve(const DenseMatrix& a, std::span<const Complex> b);
DenseMatrix inverse(const DenseMatrix& a);

DenseMatrix matrix_power(const DenseMatrix& a, std::int64_t n);

// Scaling and squaring with a Taylor series truncated once the next term is
// below 1e-14 relative.
DenseMatrix expm(const DenseMatrix& a);

}  // namespace opdyn
