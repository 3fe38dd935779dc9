#include "opdyn/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"
#include "opdyn/summation.hpp"

namespace opdyn {

Complex checked(Complex z, std::string_view what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string(what) + " must be finite");
  return z;
}

IndexUniverse IndexUniverse::nat() { return {UniverseKind::NatFromOne, 0, 1}; }
IndexUniverse IndexUniverse::integers() { return {UniverseKind::AllIntegers, 0, 1}; }
IndexUniverse IndexUniverse::finite(Index dim) {
  if (dim < 1) throw ParameterError("finite universe needs dim >= 1");
  return {UniverseKind::FiniteRange, dim, 1};
}

IndexUniverse IndexUniverse::with_blocks(int b) const {
  if (b < 1) throw ParameterError("block count must be >= 1");
  IndexUniverse u = *this;
  u.blocks = b;
  return u;
}

bool IndexUniverse::contains(Key k) const {
  if (k.block < 0 || k.block >= blocks) return false;
  switch (kind) {
    case UniverseKind::NatFromOne: return k.pos >= 1;
    case UniverseKind::AllIntegers: return true;
    case UniverseKind::FiniteRange: return k.pos >= 1 && k.pos <= dim;
  }
  return false;
}

Index IndexUniverse::dimension() const {
  if (!is_finite()) throw DomainError("infinite universe has no finite dimension");
  return dim * blocks;
}

std::string IndexUniverse::describe() const {
  std::string s;
  switch (kind) {
    case UniverseKind::NatFromOne: s = "N"; break;
    case UniverseKind::AllIntegers: s = "Z"; break;
    case UniverseKind::FiniteRange: s = "C^" + std::to_string(dim); break;
  }
  if (blocks > 1) s += "^(" + std::to_string(blocks) + " blocks)";
  return s;
}

SparseVec SparseVec::from_sorted(IndexUniverse u, std::vector<Entry> entries) {
  SparseVec v(u);
  v.entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!u.contains(e.key))
      throw DomainError("index " + std::to_string(e.key.pos) + " outside universe " + u.describe());
    if (!v.entries_.empty() && !(v.entries_.back().key < e.key))
      throw DomainError("entries must be strictly increasing");
    checked(e.value, "vector entry");
    if (e.value != Complex{}) v.entries_.push_back(e);
  }
  return v;
}

SparseVec SparseVec::from_entries(IndexUniverse u, std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (!u.contains(e.key))
      throw DomainError("index " + std::to_string(e.key.pos) + " outside universe " + u.describe());
    checked(e.value, "vector entry");
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.key < b.key; });
  SparseVec v(u);
  for (const auto& e : entries) {
    if (!v.entries_.empty() && v.entries_.back().key == e.key)
      v.entries_.back().value += e.value;
    else
      v.entries_.push_back(e);
  }
  std::erase_if(v.entries_, [](const Entry& e) { return e.value == Complex{}; });
  return v;
}

Complex SparseVec::coeff(Index pos, int block) const {
  Key k{block, pos};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const Entry& e, const Key& key) { return e.key < key; });
  if (it != entries_.end() && it->key == k) return it->value;
  return {};
}

namespace {

void require_same(const IndexUniverse& a, const IndexUniverse& b) {
  if (!(a == b))
    throw DomainError("universe mismatch: " + a.describe() + " vs " + b.describe());
}

template <class Op>
std::vector<Entry> merge(std::span<const Entry> a, std::span<const Entry> b, Op op) {
  std::vector<Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    Entry e;
    if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
      e = a[i++];
    } else if (i == a.size() || b[j].key < a[i].key) {
      e = {b[j].key, op(Complex{}, b[j].value)};
      ++j;
    } else {
      e = {a[i].key, op(a[i].value, b[j].value)};
      ++i;
      ++j;
    }
    if (e.value != Complex{}) out.push_back(e);
  }
  return out;
}

}  // namespace

SparseVec& SparseVec::operator+=(const SparseVec& o) {
  require_same(universe_, o.universe_);
  entries_ = merge(entries_, o.entries_, [](Complex a, Complex b) { return a + b; });
  return *this;
}

SparseVec& SparseVec::operator-=(const SparseVec& o) {
  require_same(universe_, o.universe_);
  entries_ = merge(entries_, o.entries_, [](Complex a, Complex b) { return a - b; });
  return *this;
}

SparseVec& SparseVec::operator*=(Complex c) {
  checked(c);
  for (auto& e : entries_) e.value *= c;
  std::erase_if(entries_, [](const Entry& e) { return e.value == Complex{}; });
  return *this;
}

SparseVec SparseVec::blocks_slice(int first, int count) const {
  if (first < 0 || count < 1 || first + count > universe_.blocks)
    throw DomainError("block slice out of range");
  SparseVec v(universe_.with_blocks(count));
  for (const auto& e : entries_)
    if (e.key.block >= first && e.key.block < first + count)
      v.entries_.push_back({{e.key.block - first, e.key.pos}, e.value});
  return v;
}

SparseVec SparseVec::embedded(IndexUniverse target, int block_offset) const {
  if (!(target.base() == universe_.base()) || block_offset < 0 ||
      block_offset + universe_.blocks > target.blocks)
    throw DomainError("cannot embed " + universe_.describe() + " into " + target.describe());
  SparseVec v(target);
  v.entries_.reserve(entries_.size());
  for (const auto& e : entries_) v.entries_.push_back({{e.key.block + block_offset, e.key.pos}, e.value});
  return v;
}

SparseVec make_vector(IndexUniverse u, const std::vector<std::pair<Index, Complex>>& pairs) {
  std::vector<Entry> es;
  es.reserve(pairs.size());
  for (const auto& [i, z] : pairs) es.push_back({{0, i}, z});
  return SparseVec::from_entries(u, std::move(es));
}

SparseVec make_block_vector(IndexUniverse u, const std::vector<std::pair<Key, Complex>>& pairs) {
  std::vector<Entry> es;
  es.reserve(pairs.size());
  for (const auto& [k, z] : pairs) es.push_back({k, z});
  return SparseVec::from_entries(u, std::move(es));
}

SparseVec basis_vector(IndexUniverse u, Index pos, int block) {
  return SparseVec::from_sorted(u, {{{block, pos}, Complex{1.0, 0.0}}});
}

double p_norm(const SparseVec& x, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p-norm needs p in [1, inf)");
  double scale = 0.0;
  for (const auto& e : x.entries()) scale = std::max(scale, std::abs(e.value));
  if (scale == 0.0) return 0.0;
  CompensatedSum s;
  if (p == 2.0) {
    for (const auto& e : x.entries()) s.add(std::norm(e.value / scale));
    return scale * std::sqrt(s.value());
  }
  for (const auto& e : x.entries()) s.add(std::pow(std::abs(e.value) / scale, p));
  return scale * std::pow(s.value(), 1.0 / p);
}

Complex inner(const SparseVec& x, const SparseVec& y) {
  require_same(x.universe(), y.universe());
  auto a = x.entries();
  auto b = y.entries();
  CompensatedComplexSum s;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].key < b[j].key) {
      ++i;
    } else if (b[j].key < a[i].key) {
      ++j;
    } else {
      s.add(a[i].value * std::conj(b[j].value));
      ++i;
      ++j;
    }
  }
  return s.value();
}

double max_abs_diff(const SparseVec& x, const SparseVec& y) {
  double m = 0.0;
  for (const auto& e : (x - y).entries()) m = std::max(m, std::abs(e.value));
  return m;
}

std::string describe(const SparseVec& x, std::size_t max_terms) {
  if (x.empty()) return "0";
  std::ostringstream os;
  std::size_t shown = 0;
  for (const auto& e : x.entries()) {
    if (shown == max_terms) {
      os << " + ... (" << x.support_size() << " terms)";
      break;
    }
    if (shown) os << " + ";
    os << "(" << format_complex(e.value) << ")e" << e.key.pos;
    if (x.universe().blocks > 1) os << "@" << e.key.block;
    ++shown;
  }
  return os.str();
}

}  // namespace opdyn
