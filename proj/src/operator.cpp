#include "opdyn/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"

namespace opdyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_single_block(const IndexUniverse& u) {
  if (u.blocks != 1) throw ParameterError("leaf operators act on single-block universes");
}

}  // namespace

Complex DiagonalNode::at(Index k) const {
  auto it = std::lower_bound(overrides.begin(), overrides.end(), k,
                             [](const auto& p, Index key) { return p.first < key; });
  if (it != overrides.end() && it->first == k) return it->second;
  return tail;
}

OperatorSpec OperatorSpec::shift(ShiftDirection dir, IndexUniverse u, WeightRule rule) {
  require_single_block(u);
  if (u.kind == UniverseKind::AllIntegers) {
    if (!rule.valid_everywhere())
      throw ConstructionError("weight rule " + rule.describe() + " is not defined on all of Z");
  } else {
    const Index lo = dir == ShiftDirection::Forward ? 1 : 2;
    const bool used = !u.is_finite() || u.dim >= 2;
    if (used && !rule.valid_at(lo))
      throw ConstructionError("weight rule " + rule.describe() + " is undefined at index " + std::to_string(lo));
  }
  return OperatorSpec(std::make_shared<OperatorNode>(OperatorNode{u, ShiftNode{dir, std::move(rule)}}));
}

OperatorSpec OperatorSpec::bilateral_shift(WeightRule rule) {
  return shift(ShiftDirection::Forward, IndexUniverse::integers(), std::move(rule));
}

OperatorSpec OperatorSpec::diagonal(IndexUniverse u, std::vector<std::pair<Index, Complex>> overrides,
                                    Complex tail) {
  require_single_block(u);
  checked(tail, "diagonal tail");
  std::sort(overrides.begin(), overrides.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    if (!u.contains({0, overrides[i].first}))
      throw DomainError("diagonal index " + std::to_string(overrides[i].first) + " outside " + u.describe());
    if (i && overrides[i].first == overrides[i - 1].first)
      throw ConstructionError("duplicate diagonal index " + std::to_string(overrides[i].first));
    checked(overrides[i].second, "diagonal entry");
  }
  return OperatorSpec(
      std::make_shared<OperatorNode>(OperatorNode{u, DiagonalNode{std::move(overrides), tail}}));
}

OperatorSpec OperatorSpec::finite_matrix(DenseMatrix m) {
  if (!m.square() || m.rows() == 0) throw ConstructionError("finite matrix must be square and nonempty");
  for (const auto& z : m.data()) checked(z, "matrix entry");
  const auto u = IndexUniverse::finite(static_cast<Index>(m.rows()));
  return OperatorSpec(std::make_shared<OperatorNode>(OperatorNode{u, MatrixNode{std::move(m)}}));
}

OperatorSpec OperatorSpec::block_tz(OperatorSpec inner) {
  const auto u = inner.universe().with_blocks(2 * inner.universe().blocks);
  return OperatorSpec(std::make_shared<OperatorNode>(OperatorNode{u, BlockTZNode{std::move(inner)}}));
}

OperatorSpec OperatorSpec::direct_sum(std::vector<OperatorSpec> parts) {
  if (parts.empty()) throw ConstructionError("direct sum needs at least one part");
  const IndexUniverse base = parts.front().universe().base();
  std::vector<int> offsets;
  int blocks = 0;
  for (const auto& p : parts) {
    if (!(p.universe().base() == base))
      throw ConstructionError("direct sum parts must share the base universe " + base.describe());
    offsets.push_back(blocks);
    blocks += p.universe().blocks;
  }
  return OperatorSpec(std::make_shared<OperatorNode>(
      OperatorNode{base.with_blocks(blocks), DirectSumNode{std::move(parts), std::move(offsets)}}));
}

OperatorSpec OperatorSpec::sum(std::vector<OperatorSpec> terms) {
  if (terms.empty()) throw ConstructionError("sum needs at least one term");
  const IndexUniverse u = terms.front().universe();
  for (const auto& t : terms)
    if (!(t.universe() == u)) throw ConstructionError("sum terms must act on the same universe");
  return OperatorSpec(std::make_shared<OperatorNode>(OperatorNode{u, SumNode{std::move(terms)}}));
}

OperatorSpec OperatorSpec::scalar_multiple(Complex lambda, OperatorSpec inner) {
  checked(lambda, "scalar");
  const auto u = inner.universe();
  return OperatorSpec(std::make_shared<OperatorNode>(OperatorNode{u, ScalarNode{lambda, std::move(inner)}}));
}

OperatorSpec OperatorSpec::diag_plus_nilpotent(int dim, int ell, Complex l1, Complex l2) {
  if (dim < 4) throw ParameterError("diagonal-plus-nilpotent needs dim >= 4");
  if (ell < 2 || ell > dim - 2) throw ParameterError("ell must lie in [2, dim-2]");
  checked(l1, "lambda1");
  checked(l2, "lambda2");
  DenseMatrix m = DenseMatrix::identity(static_cast<std::size_t>(dim));
  for (int i = 0; i < ell; ++i) m(i, i) = l1;
  m(ell, ell) = l2;
  m(ell + 1, ell + 1) = l2;
  for (int i = 1; i < ell; ++i) m(i - 1, i) = l1 - 1.0;
  m(ell, ell + 1) = l2 - 1.0;
  const auto u = IndexUniverse::finite(dim);
  return OperatorSpec(
      std::make_shared<OperatorNode>(OperatorNode{u, DiagNilNode{dim, ell, l1, l2, std::move(m)}}));
}

const IndexUniverse& OperatorSpec::universe() const { return node_->universe; }

std::string OperatorSpec::describe() const {
  const auto& u = node_->universe;
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) {
            std::string name = s.dir == ShiftDirection::Forward ? "forward_shift" : "backward_shift";
            return name + "[" + u.describe() + "](" + s.rule.describe() + ")";
          },
          [&](const DiagonalNode& d) {
            if (d.overrides.empty() && d.tail == Complex(1.0, 0.0)) return "identity[" + u.describe() + "]";
            std::string s = "diagonal[" + u.describe() + "](";
            for (const auto& [k, v] : d.overrides) s += std::to_string(k) + ":" + format_complex(v) + ",";
            return s + "tail=" + format_complex(d.tail) + ")";
          },
          [&](const MatrixNode& m) {
            std::string s = "matrix[";
            for (std::size_t i = 0; i < m.m.rows(); ++i) {
              s += i ? ",[" : "[";
              for (std::size_t j = 0; j < m.m.cols(); ++j) s += (j ? "," : "") + format_complex(m.m(i, j));
              s += "]";
            }
            return s + "]";
          },
          [&](const BlockTZNode& b) { return "block_tz(" + b.inner.describe() + ")"; },
          [&](const DirectSumNode& d) {
            std::string s = "direct_sum(";
            for (std::size_t i = 0; i < d.parts.size(); ++i) s += (i ? "," : "") + d.parts[i].describe();
            return s + ")";
          },
          [&](const SumNode& d) {
            std::string s = "sum(";
            for (std::size_t i = 0; i < d.terms.size(); ++i) s += (i ? "," : "") + d.terms[i].describe();
            return s + ")";
          },
          [&](const ScalarNode& s) { return "scalar(" + format_complex(s.lambda) + "," + s.inner.describe() + ")"; },
          [&](const DiagNilNode& d) {
            return "diag_plus_nilpotent(dim=" + std::to_string(d.dim) + ",ell=" + std::to_string(d.ell) +
                   ",l1=" + format_complex(d.l1) + ",l2=" + format_complex(d.l2) + ")";
          },
      },
      node_->v);
}

std::vector<Complex> to_dense_vector(const SparseVec& x) {
  const auto& u = x.universe();
  std::vector<Complex> v(static_cast<std::size_t>(u.dimension()));
  for (const auto& e : x.entries()) v[static_cast<std::size_t>(e.key.block * u.dim + e.key.pos - 1)] = e.value;
  return v;
}

SparseVec from_dense_vector(IndexUniverse u, std::span<const Complex> v) {
  if (static_cast<Index>(v.size()) != u.dimension()) throw DomainError("dense vector size mismatch");
  std::vector<Entry> es;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != Complex{})
      es.push_back({{static_cast<int>(static_cast<Index>(i) / u.dim), static_cast<Index>(i) % u.dim + 1}, v[i]});
  return SparseVec::from_sorted(u, std::move(es));
}

namespace {

SparseVec apply_shift(const ShiftNode& s, const IndexUniverse& u, const SparseVec& x) {
  std::vector<Entry> out;
  out.reserve(x.support_size());
  const bool fwd = s.dir == ShiftDirection::Forward;
  for (const auto& e : x.entries()) {
    const Index k = e.key.pos;
    const Index target = fwd ? k + 1 : k - 1;
    if (!u.contains({0, target})) continue;
    out.push_back({{0, target}, s.rule.at(k) * e.value});
  }
  return SparseVec::from_sorted(u, std::move(out));
}

}  // namespace

SparseVec apply(const OperatorSpec& spec, const SparseVec& x) {
  const auto& u = spec.universe();
  if (!(x.universe() == u))
    throw DomainError("vector universe " + x.universe().describe() + " does not match operator universe " +
                      u.describe());
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) { return apply_shift(s, u, x); },
          [&](const DiagonalNode& d) {
            std::vector<Entry> out;
            out.reserve(x.support_size());
            for (const auto& e : x.entries()) out.push_back({e.key, d.at(e.key.pos) * e.value});
            return SparseVec::from_sorted(u, std::move(out));
          },
          [&](const MatrixNode& m) { return from_dense_vector(u, m.m.apply(to_dense_vector(x))); },
          [&](const BlockTZNode& b) {
            const int nb = b.inner.universe().blocks;
            const SparseVec top = x.blocks_slice(0, nb);
            const SparseVec bottom = x.blocks_slice(nb, nb);
            SparseVec new_bottom = apply(b.inner, bottom);
            SparseVec new_top = apply(b.inner, top) + (new_bottom - bottom);
            return new_top.embedded(u, 0) + new_bottom.embedded(u, nb);
          },
          [&](const DirectSumNode& d) {
            std::vector<Entry> out;
            for (std::size_t i = 0; i < d.parts.size(); ++i) {
              const int nb = d.parts[i].universe().blocks;
              const SparseVec y = apply(d.parts[i], x.blocks_slice(d.block_offsets[i], nb));
              for (const auto& e : y.entries())
                out.push_back({{e.key.block + d.block_offsets[i], e.key.pos}, e.value});
            }
            return SparseVec::from_sorted(u, std::move(out));
          },
          [&](const SumNode& s) {
            SparseVec acc(u);
            for (const auto& t : s.terms) acc += apply(t, x);
            return acc;
          },
          [&](const ScalarNode& s) { return s.lambda * apply(s.inner, x); },
          [&](const DiagNilNode& d) { return from_dense_vector(u, d.m.apply(to_dense_vector(x))); },
      },
      spec.node().v);
}

OperatorSpec adjoint(const OperatorSpec& spec) {
  const auto& u = spec.universe();
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) {
            // (w_k e_k -> e_{k+1})* sends e_{k+1} back to w_k e_k.
            if (s.dir == ShiftDirection::Forward)
              return OperatorSpec::shift(ShiftDirection::Backward, u, s.rule.shifted(-1));
            return OperatorSpec::shift(ShiftDirection::Forward, u, s.rule.shifted(1));
          },
          [&](const DiagonalNode& d) {
            auto o = d.overrides;
            for (auto& p : o) p.second = std::conj(p.second);
            return OperatorSpec::diagonal(u, std::move(o), std::conj(d.tail));
          },
          [&](const MatrixNode& m) { return OperatorSpec::finite_matrix(m.m.adjoint()); },
          [&](const BlockTZNode&) -> OperatorSpec {
            throw UnsupportedError("adjoint of block_tz is not supported; use its finite matrix form");
          },
          [&](const DirectSumNode& d) {
            std::vector<OperatorSpec> parts;
            for (const auto& p : d.parts) parts.push_back(adjoint(p));
            return OperatorSpec::direct_sum(std::move(parts));
          },
          [&](const SumNode& s) {
            std::vector<OperatorSpec> terms;
            for (const auto& t : s.terms) terms.push_back(adjoint(t));
            return OperatorSpec::sum(std::move(terms));
          },
          [&](const ScalarNode& s) { return OperatorSpec::scalar_multiple(std::conj(s.lambda), adjoint(s.inner)); },
          [&](const DiagNilNode&) -> OperatorSpec {
            throw UnsupportedError("adjoint of diag_plus_nilpotent is not supported; use its finite matrix form");
          },
      },
      spec.node().v);
}

OperatorSpec scale(Complex lambda, const OperatorSpec& spec) { return OperatorSpec::scalar_multiple(lambda, spec); }

DenseMatrix to_dense(const OperatorSpec& spec) {
  const auto& u = spec.universe();
  if (!u.is_finite()) throw UnsupportedError("operator " + spec.describe() + " is not finite-dimensional");
  const auto n = static_cast<std::size_t>(u.dimension());
  return std::visit(
      overloaded{
          [&](const ShiftNode& s) {
            DenseMatrix m(n, n);
            for (Index k = 1; k <= u.dim; ++k) {
              const Index t = s.dir == ShiftDirection::Forward ? k + 1 : k - 1;
              if (t < 1 || t > u.dim) continue;
              m(static_cast<std::size_t>(t - 1), static_cast<std::size_t>(k - 1)) = s.rule.at(k);
            }
            return m;
          },
          [&](const DiagonalNode& d) {
            DenseMatrix m(n, n);
            for (Index k = 1; k <= u.dim; ++k) m(k - 1, k - 1) = d.at(k);
            return m;
          },
          [&](const MatrixNode& m) { return m.m; },
          [&](const BlockTZNode& b) {
            const DenseMatrix a = to_dense(b.inner);
            const std::size_t h = a.rows();
            DenseMatrix m(n, n);
            for (std::size_t i = 0; i < h; ++i)
              for (std::size_t j = 0; j < h; ++j) {
                m(i, j) = a(i, j);
                m(h + i, h + j) = a(i, j);
                m(i, h + j) = a(i, j) - (i == j ? 1.0 : 0.0);
              }
            return m;
          },
          [&](const DirectSumNode& d) {
            DenseMatrix m(n, n);
            for (std::size_t p = 0; p < d.parts.size(); ++p) {
              const DenseMatrix a = to_dense(d.parts[p]);
              const std::size_t off = static_cast<std::size_t>(d.block_offsets[p] * u.dim);
              for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) m(off + i, off + j) = a(i, j);
            }
            return m;
          },
          [&](const SumNode& s) {
            DenseMatrix m(n, n);
            for (const auto& t : s.terms) m += to_dense(t);
            return m;
          },
          [&](const ScalarNode& s) { return s.lambda * to_dense(s.inner); },
          [&](const DiagNilNode& d) { return d.m; },
      },
      spec.node().v);
}

}  // namespace opdyn
