#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opdyn {

using Complex = std::complex<double>;
using Index = std::int64_t;

// Throws DomainError when either component is NaN or infinite.
Complex checked(Complex z, std::string_view what = "scalar");

enum class UniverseKind { NatFromOne, AllIntegers, FiniteRange };

struct Key {
  int block = 0;
  Index pos = 0;
  auto operator<=>(const Key&) const = default;
};

// An index set together with a block count. Block constructions (the 2x2
// block operator, direct sums) stack copies of a base universe; a key is
// (block, position).
struct IndexUniverse {
  UniverseKind kind = UniverseKind::NatFromOne;
  Index dim = 0;
  int blocks = 1;

  static IndexUniverse nat();
  static IndexUniverse integers();
  static IndexUniverse finite(Index dim);

  IndexUniverse with_blocks(int b) const;
  IndexUniverse base() const { return with_blocks(1); }
  bool contains(Key k) const;
  bool is_finite() const { return kind == UniverseKind::FiniteRange; }
  Index first_index() const { return kind == UniverseKind::AllIntegers ? 0 : 1; }
  // Total dimension for finite universes (dim * blocks).
  Index dimension() const;
  std::string describe() const;

  friend bool operator==(const IndexUniverse&, const IndexUniverse&) = default;
};

struct Entry {
  Key key;
  Complex value;
  friend bool operator==(const Entry&, const Entry&) = default;
};

// Finitely supported vector. Entries are kept sorted by key and exact zeros
// are never stored, so equality is exact support-wise comparison.
class SparseVec {
 public:
  SparseVec() = default;
  explicit SparseVec(IndexUniverse u) : universe_(u) {}

  // Entries must be strictly increasing by key and inside the universe.
  static SparseVec from_sorted(IndexUniverse u, std::vector<Entry> entries);
  // Sorts, sums duplicates, drops zeros.
  static SparseVec from_entries(IndexUniverse u, std::vector<Entry> entries);

  const IndexUniverse& universe() const { return universe_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Complex coeff(Index pos, int block = 0) const;

  SparseVec& operator+=(const SparseVec& o);
  SparseVec& operator-=(const SparseVec& o);
  SparseVec& operator*=(Complex c);
  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator*(Complex c, SparseVec a) { return a *= c; }
  friend bool operator==(const SparseVec&, const SparseVec&) = default;

  // Keeps blocks [first, first+count) and renumbers them from 0.
  SparseVec blocks_slice(int first, int count) const;
  // Re-homes this vector into a universe with more blocks, shifted by offset.
  SparseVec embedded(IndexUniverse target, int block_offset) const;

 private:
  IndexUniverse universe_{};
  std::vector<Entry> entries_;
};

SparseVec make_vector(IndexUniverse u, const std::vector<std::pair<Index, Complex>>& pairs);
SparseVec make_block_vector(IndexUniverse u, const std::vector<std::pair<Key, Complex>>& pairs);
SparseVec basis_vector(IndexUniverse u, Index pos, int block = 0);

double p_norm(const SparseVec& x, double p);
// Sum of x_j * conj(y_j).
Complex inner(const SparseVec& x, const SparseVec& y);
// Largest absolute coefficient difference; universes must match.
double max_abs_diff(const SparseVec& x, const SparseVec& y);

std::string describe(const SparseVec& x, std::size_t max_terms = 8);

}  // namespace opdyn
