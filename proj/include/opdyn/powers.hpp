#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "opdyn/core.hpp"
#include "opdyn/operator.hpp"
#include "opdyn/summation.hpp"

namespace opdyn {

enum class NormKind { VectorOrbit, OperatorNorm };

// (n, value) pairs with n strictly increasing and finite nonnegative values.
struct NormSeq {
  NormKind kind = NormKind::VectorOrbit;
  double p = 2.0;
  std::vector<std::pair<Index, double>> entries;

  void push(Index n, double value);
  std::size_t size() const { return entries.size(); }
};

// Running sum of vectors over a universe, stored as dense windows per block
// with compensated accumulation. Tracks sum |s_i|^p incrementally so the
// p-norm is available after every add; the tracked value is recomputed
// exactly whenever the add count reaches a power of two.
class OrbitSum {
 public:
  OrbitSum(IndexUniverse u, double p);

  void add(const SparseVec& v, Complex factor = Complex(1.0, 0.0));
  double norm() const;
  double exact_norm() const;
  // Sum divided by d (entrywise division).
  SparseVec divided(double d) const;
  SparseVec value() const { return divided(1.0); }
  std::int64_t count() const { return adds_; }

 private:
  struct Window {
    Index lo = 0;
    std::vector<CompensatedComplexSum> cells;
  };
  double magnitude(Complex z) const;
  void resync();
  CompensatedComplexSum& cell(int block, Index pos);

  IndexUniverse u_;
  double p_;
  std::vector<Window> windows_;
  CompensatedSum total_;
  std::int64_t adds_ = 0;
};

SparseVec power_apply(const OperatorSpec& spec, const SparseVec& x, Index n);

// ||T^n|| for shifts (any direction, any p), diagonals (any p), scalar
// multiples and direct sums of those, and finite-dimensional operators
// (p = 2 only, via the largest singular value).
double power_norm_exact(const OperatorSpec& spec, Index n, double p);
NormSeq power_norms(const OperatorSpec& spec, std::span<const Index> ns, double p);
// A basis index attaining the supremum for shifts (used by tests). Throws
// for non-shift operators or when the supremum is a limit.
Index power_norm_attaining_index(const OperatorSpec& spec, Index n);

NormSeq orbit_norms(const OperatorSpec& spec, const SparseVec& x, double p, Index N);

SparseVec cesaro_apply(const OperatorSpec& spec, const SparseVec& x, Index n);
// Largest singular value of M_n(lambda T) for finite-dimensional T.
double cesaro_operator_norm(const OperatorSpec& spec, Index n, Complex lambda);
// ||M_n(lambda A)|| for n = 0..N.
std::vector<double> cesaro_operator_norms(const DenseMatrix& a, Complex lambda, Index N);
// ||A^n|| for n = 0..N.
std::vector<double> power_operator_norms(const DenseMatrix& a, Index N);

double media_residual(const OperatorSpec& spec, const SparseVec& x, Index n, double p);
double block_tz_power_check(const OperatorSpec& inner, const SparseVec& x, Index n);

}  // namespace opdyn
