#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "opdyn/core.hpp"
#include "opdyn/linalg.hpp"
#include "opdyn/weights.hpp"

namespace opdyn {

enum class ShiftDirection { Forward, Backward };

struct OperatorNode;

// Immutable symbolic operator. Copies share the underlying node.
class OperatorSpec {
 public:
  // Forward: e_k -> w_k e_{k+1}. Backward: e_k -> w_k e_{k-1} (e_1 -> 0 on N).
  static OperatorSpec shift(ShiftDirection dir, IndexUniverse u, WeightRule rule);
  static OperatorSpec forward_shift(IndexUniverse u, WeightRule rule) {
    return shift(ShiftDirection::Forward, u, std::move(rule));
  }
  static OperatorSpec backward_shift(IndexUniverse u, WeightRule rule) {
    return shift(ShiftDirection::Backward, u, std::move(rule));
  }
  // Forward shift on Z.
  static OperatorSpec bilateral_shift(WeightRule rule);

  static OperatorSpec diagonal(IndexUniverse u, std::vector<std::pair<Index, Complex>> overrides, Complex tail);
  static OperatorSpec identity(IndexUniverse u) { return diagonal(u, {}, 1.0); }
  static OperatorSpec finite_matrix(DenseMatrix m);
  // [[T, T - I], [0, T]] on pairs (top, bottom).
  static OperatorSpec block_tz(OperatorSpec inner);
  static OperatorSpec direct_sum(std::vector<OperatorSpec> parts);
  static OperatorSpec sum(std::vector<OperatorSpec> terms);
  static OperatorSpec scalar_multiple(Complex lambda, OperatorSpec inner);
  // D + Q_lambda on C^dim: diagonal (l1 x ell, l2, l2, 1, ...), with
  // e_i -> (lambda - 1) e_{i-1} inside the two Jordan-type blocks.
  static OperatorSpec diag_plus_nilpotent(int dim, int ell, Complex l1, Complex l2);

  const OperatorNode& node() const { return *node_; }
  const IndexUniverse& universe() const;
  bool finite_dimensional() const { return universe().is_finite(); }
  std::string describe() const;

 private:
  explicit OperatorSpec(std::shared_ptr<const OperatorNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const OperatorNode> node_;
};

struct ShiftNode {
  ShiftDirection dir;
  WeightRule rule;
};
struct DiagonalNode {
  std::vector<std::pair<Index, Complex>> overrides;  // sorted, unique
  Complex tail;
  Complex at(Index k) const;
};
struct MatrixNode {
  DenseMatrix m;
};
struct BlockTZNode {
  OperatorSpec inner;
};
struct DirectSumNode {
  std::vector<OperatorSpec> parts;
  std::vector<int> block_offsets;
};
struct SumNode {
  std::vector<OperatorSpec> terms;
};
struct ScalarNode {
  Complex lambda;
  OperatorSpec inner;
};
struct DiagNilNode {
  int dim, ell;
  Complex l1, l2;
  DenseMatrix m;
};

struct OperatorNode {
  IndexUniverse universe;
  std::variant<ShiftNode, DiagonalNode, MatrixNode, BlockTZNode, DirectSumNode, SumNode, ScalarNode,
               DiagNilNode>
      v;
};

SparseVec apply(const OperatorSpec& spec, const SparseVec& x);
OperatorSpec adjoint(const OperatorSpec& spec);
OperatorSpec scale(Complex lambda, const OperatorSpec& spec);
// Dense matrix of a finite-dimensional operator; basis ordered block-major.
DenseMatrix to_dense(const OperatorSpec& spec);

// Conversions between finite-dimensional sparse vectors and dense arrays in
// the to_dense ordering.
std::vector<Complex> to_dense_vector(const SparseVec& x);
SparseVec from_dense_vector(IndexUniverse u, std::span<const Complex> v);

}  // namespace opdyn
