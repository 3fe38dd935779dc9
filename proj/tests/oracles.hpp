#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the closed forms or dense routines under test.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "opdyn/operator.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline Mat to_eigen(const opdyn::DenseMatrix& m) {
  Mat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

inline double spectral_norm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

inline Mat power(const Mat& a, long n) {
  Mat r = Mat::Identity(a.rows(), a.cols());
  for (long k = 0; k < n; ++k) r = r * a;
  return r;
}

// ||M_n(lambda A)|| by direct summation of powers.
inline double cesaro_norm(const Mat& a, long n, cd lambda) {
  Mat acc = Mat::Zero(a.rows(), a.cols());
  Mat pk = Mat::Identity(a.rows(), a.cols());
  for (long k = 0; k <= n; ++k) {
    acc += pk;
    pk = pk * (lambda * a);
  }
  return spectral_norm(acc / static_cast<double>(n + 1));
}

// (|lambda| - 1) ||(lambda I - A)^{-1}|| through a full inverse.
inline double scaled_resolvent(const Mat& a, cd lambda) {
  Mat r = (lambda * Mat::Identity(a.rows(), a.cols()) - a).inverse();
  return (std::abs(lambda) - 1.0) * spectral_norm(r);
}

// Product of weights from iterated application: ||T^n e_j|| for one basis
// vector, computed step by step.
inline double basis_orbit_norm(const opdyn::OperatorSpec& s, opdyn::Index j, opdyn::Index n, double p) {
  opdyn::SparseVec v = opdyn::basis_vector(s.universe(), j);
  for (opdyn::Index k = 0; k < n; ++k) v = opdyn::apply(s, v);
  return opdyn::p_norm(v, p);
}

inline std::vector<double> norm_squares(const opdyn::OperatorSpec& s, const opdyn::SparseVec& x, int count) {
  std::vector<double> out;
  opdyn::SparseVec v = x;
  for (int k = 0; k < count; ++k) {
    double acc = 0.0;
    for (const auto& e : v.entries()) acc += std::norm(e.value);
    out.push_back(acc);
    v = opdyn::apply(s, v);
  }
  return out;
}

// m-th finite difference at 0 through repeated differencing.
inline double nth_difference(std::vector<double> s, int m) {
  for (int r = 0; r < m; ++r)
    for (std::size_t i = 0; i + 1 < s.size() - static_cast<std::size_t>(r); ++i) s[i] = s[i + 1] - s[i];
  return s[0];
}

}  // namespace oracle
