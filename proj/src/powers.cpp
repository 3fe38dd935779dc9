#include "opdyn/powers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>

#include "opdyn/errors.hpp"

namespace opdyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr Index kScanCap = 1'000'000;

}  // namespace

void NormSeq::push(Index n, double value) {
  if (n < 0) throw DomainError("norm sequence index must be nonnegative");
  if (!entries.empty() && n <= entries.back().first)
    throw DomainError("norm sequence indices must be strictly increasing");
  if (!std::isfinite(value) || value < 0.0) throw DomainError("norm sequence values must be finite and >= 0");
  entries.emplace_back(n, value);
}

// ---------------------------------------------------------------------------
// OrbitSum

OrbitSum::OrbitSum(IndexUniverse u, double p) : u_(u), p_(p), windows_(static_cast<std::size_t>(u.blocks)) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
}

double OrbitSum::magnitude(Complex z) const { return p_ == 2.0 ? std::norm(z) : std::pow(std::abs(z), p_); }

CompensatedComplexSum& OrbitSum::cell(int block, Index pos) {
  Window& w = windows_[static_cast<std::size_t>(block)];
  if (w.cells.empty()) {
    w.lo = pos;
    w.cells.resize(1);
    return w.cells[0];
  }
  if (pos < w.lo) {
    const Index grow = std::max<Index>(w.lo - pos, static_cast<Index>(w.cells.size()));
    w.cells.insert(w.cells.begin(), static_cast<std::size_t>(grow), CompensatedComplexSum{});
    w.lo -= grow;
  }
  const auto idx = static_cast<std::size_t>(pos - w.lo);
  if (idx >= w.cells.size()) w.cells.resize(idx + 1);
  return w.cells[idx];
}

void OrbitSum::add(const SparseVec& v, Complex factor) {
  if (!(v.universe() == u_)) throw DomainError("orbit sum universe mismatch");
  for (const auto& e : v.entries()) {
    auto& c = cell(e.key.block, e.key.pos);
    const double before = magnitude(c.value());
    c.add(factor * e.value);
    total_.add(magnitude(c.value()) - before);
  }
  ++adds_;
  if (std::has_single_bit(static_cast<std::uint64_t>(adds_))) resync();
}

void OrbitSum::resync() {
  CompensatedSum t;
  for (const auto& w : windows_)
    for (const auto& c : w.cells) t.add(magnitude(c.value()));
  total_ = t;
}

double OrbitSum::norm() const { return std::pow(std::max(0.0, total_.value()), 1.0 / p_); }

double OrbitSum::exact_norm() const { return p_norm(value(), p_); }

SparseVec OrbitSum::divided(double d) const {
  std::vector<Entry> es;
  for (std::size_t b = 0; b < windows_.size(); ++b) {
    const auto& w = windows_[b];
    for (std::size_t i = 0; i < w.cells.size(); ++i) {
      const Complex z = w.cells[i].value();
      if (z != Complex{}) es.push_back({{static_cast<int>(b), w.lo + static_cast<Index>(i)}, z / d});
    }
  }
  return SparseVec::from_sorted(u_, std::move(es));
}

// ---------------------------------------------------------------------------
// Powers

SparseVec power_apply(const OperatorSpec& spec, const SparseVec& x, Index n) {
  if (n < 0) throw ParameterError("power must be >= 0");
  SparseVec y = x;
  if (!(y.universe() == spec.universe())) throw DomainError("vector universe does not match operator");
  for (Index k = 0; k < n && !y.empty(); ++k) y = apply(spec, y);
  return y;
}

namespace {

// Start indices s of length-n weight windows that occur in T^n e_j.
struct StartRange {
  bool empty = false;
  bool lo_inf = false, hi_inf = false;
  Index lo = 0, hi = 0;
};

StartRange start_range(const ShiftNode& s, const IndexUniverse& u, Index n) {
  StartRange r;
  const bool fwd = s.dir == ShiftDirection::Forward;
  switch (u.kind) {
    case UniverseKind::AllIntegers:
      r.lo_inf = r.hi_inf = true;
      break;
    case UniverseKind::NatFromOne:
      r.lo = fwd ? 1 : 2;
      r.hi_inf = true;
      break;
    case UniverseKind::FiniteRange:
      r.lo = fwd ? 1 : 2;
      r.hi = fwd ? u.dim - n : u.dim - n + 1;
      r.empty = r.hi < r.lo;
      break;
  }
  return r;
}

struct ShiftSup {
  double log_value = -std::numeric_limits<double>::infinity();
  std::optional<Index> start;  // absent when the sup is a limit
  void offer(double lv, std::optional<Index> s) {
    if (lv > log_value) {
      log_value = lv;
      start = s;
    }
  }
};

ShiftSup power_ratio_sup(const PowerRatio& r, Index off, const StartRange& range, Index n) {
  const auto window_log = [&](Index s) {
    const double b = static_cast<double>(s + off);
    const double nd = static_cast<double>(n);
    return r.form == RatioForm::KOverKMinusOne ? r.alpha * std::log1p(nd / (b - 1.0))
                                               : r.alpha * std::log1p(nd / b);
  };
  ShiftSup sup;
  if (r.alpha >= 0.0) {
    // Window products decrease in s, so the first admissible start wins.
    const double first = window_log(range.lo);
    const bool has_next = range.hi_inf || range.hi > range.lo;
    if (has_next && window_log(range.lo + 1) > first)
      throw std::logic_error("power-ratio window products are not monotone");
    sup.offer(first, range.lo);
  } else if (range.hi_inf) {
    sup.offer(0.0, std::nullopt);
  } else {
    sup.offer(window_log(range.hi), range.hi);
  }
  return sup;
}

ShiftSup poly_ratio_sup(const PolyRatio& r, Index off, const StartRange& range, Index n) {
  const Polynomial& p = r.p;
  const auto window_log = [&](Index s) {
    const double b = static_cast<double>(s + off);
    const double hi = p(b + static_cast<double>(n));
    const double lo = p(b);
    if (!(hi > 0.0) || !(lo > 0.0)) throw ConstructionError("polynomial " + p.describe() + " not positive near " + std::to_string(s + off));
    return 0.5 * (std::log(hi) - std::log(lo));
  };
  ShiftSup sup;
  const Polynomial pn = p.shifted(static_cast<double>(n));
  const Polynomial q = pn.derivative() * p - pn * p.derivative();
  if (q.is_zero() || p.degree() <= 0) {
    const Index s = range.lo_inf ? 0 : range.lo;
    sup.offer(window_log(s), s);
    return sup;
  }
  // Outside |b| <= bound the window product is monotone in b.
  const double bound = std::ceil(cauchy_root_bound(q)) + 1.0;
  const bool right_increasing = q.leading() > 0.0;
  const bool left_decreasing = (q.degree() % 2 == 0) ? q.leading() < 0.0 : q.leading() > 0.0;

  Index lo_s, hi_s;
  if (range.lo_inf) {
    lo_s = static_cast<Index>(-bound) - off;
  } else {
    lo_s = range.lo;
  }
  const Index want_hi = std::max(lo_s, static_cast<Index>(bound) - off);
  hi_s = range.hi_inf ? want_hi : std::min(range.hi, want_hi);
  bool capped = false;
  if (hi_s - lo_s + 1 > kScanCap) {
    hi_s = lo_s + kScanCap - 1;
    capped = true;
  }
  std::vector<double> tail_vals;
  for (Index s = lo_s; s <= hi_s; ++s) {
    const double lv = window_log(s);
    sup.offer(lv, s);
    if (capped && hi_s - s < 1000) tail_vals.push_back(lv);
  }
  if (capped) {
    const bool nonincreasing = std::is_sorted(tail_vals.rbegin(), tail_vals.rend());
    const bool nondecreasing = std::is_sorted(tail_vals.begin(), tail_vals.end());
    if (!nonincreasing && !nondecreasing)
      throw IndeterminateError("window products are not monotone past the scan horizon");
    if (nondecreasing && !nonincreasing) {
      if (range.hi_inf) sup.offer(0.0, std::nullopt);
      else sup.offer(window_log(range.hi), range.hi);
    }
  } else if (range.hi_inf || hi_s < range.hi) {
    if (right_increasing) {
      if (range.hi_inf) sup.offer(0.0, std::nullopt);
      else sup.offer(window_log(range.hi), range.hi);
    }
  }
  if (range.lo_inf && left_decreasing) sup.offer(0.0, std::nullopt);
  return sup;
}

ShiftSup explicit_sup(const ExplicitWeights& r, Index off, const StartRange& range, Index n) {
  const double log_tail = std::log(r.tail);
  const Index len = static_cast<Index>(r.head.size());
  std::vector<double> prefix(r.head.size() + 1, 0.0);
  {
    CompensatedSum acc;
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      acc.add(std::log(r.head[i]));
      prefix[i + 1] = acc.value();
    }
  }
  const auto window_log = [&](Index s) {
    const Index b = s + off;
    const Index a0 = std::max(b, r.first);
    const Index a1 = std::min(b + n - 1, r.first + len - 1);
    const Index overlap = a1 >= a0 ? a1 - a0 + 1 : 0;
    double head_part = 0.0;
    if (overlap > 0)
      head_part = prefix[static_cast<std::size_t>(a1 - r.first + 1)] - prefix[static_cast<std::size_t>(a0 - r.first)];
    return head_part + static_cast<double>(n - overlap) * log_tail;
  };
  ShiftSup sup;
  // Starts whose window meets the head.
  Index lo_s = r.first - n + 1 - off;
  Index hi_s = r.first + len - 1 - off;
  if (!range.lo_inf) lo_s = std::max(lo_s, range.lo);
  if (!range.hi_inf) hi_s = std::min(hi_s, range.hi);
  for (Index s = lo_s; s <= hi_s; ++s) sup.offer(window_log(s), s);
  // A window entirely inside the tail.
  const Index before = r.first - n - off;  // largest start ending before the head
  const Index after = r.first + len - off;  // smallest start beginning after it
  std::optional<Index> pure;
  if (range.lo_inf) {
    pure = before;
  } else if (before >= range.lo) {
    pure = range.lo;
  } else {
    const Index candidate = std::max(after, range.lo);
    if (range.hi_inf || candidate <= range.hi) pure = candidate;
  }
  if (pure && (range.hi_inf || *pure <= range.hi)) sup.offer(static_cast<double>(n) * log_tail, *pure);
  return sup;
}

ShiftSup shift_sup(const ShiftNode& s, const IndexUniverse& u, Index n) {
  const StartRange range = start_range(s, u, n);
  if (range.empty) return {};
  const Index off = s.rule.offset();
  return std::visit(overloaded{
                        [&](const PowerRatio& r) { return power_ratio_sup(r, off, range, n); },
                        [&](const PolyRatio& r) { return poly_ratio_sup(r, off, range, n); },
                        [&](const ExplicitWeights& r) { return explicit_sup(r, off, range, n); },
                    },
                    s.rule.base());
}

bool dense_route(const OperatorSpec& spec) {
  return std::visit(overloaded{
                        [](const ShiftNode&) { return false; },
                        [](const DiagonalNode&) { return false; },
                        [](const ScalarNode& s) { return dense_route(s.inner); },
                        [](const DirectSumNode& d) {
                          return std::any_of(d.parts.begin(), d.parts.end(),
                                             [](const OperatorSpec& p) { return dense_route(p); });
                        },
                        [](const auto&) { return true; },
                    },
                    spec.node().v);
}

double dense_power_norm(const OperatorSpec& spec, Index n, double p) {
  if (p != 2.0) throw ParameterError("finite-matrix power norms are only available for p = 2");
  if (!spec.finite_dimensional())
    throw UnsupportedError("no exact power norm for " + spec.describe() + "; use orbit probes for lower bounds");
  return largest_singular_value(matrix_power(to_dense(spec), n));
}

}  // namespace

double power_norm_exact(const OperatorSpec& spec, Index n, double p) {
  if (n < 0) throw ParameterError("power must be >= 0");
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  if (dense_route(spec)) return dense_power_norm(spec, n, p);
  const auto& u = spec.universe();
  return std::visit(overloaded{
                        [&](const ShiftNode& s) {
                          if (n == 0) return 1.0;
                          const ShiftSup sup = shift_sup(s, u, n);
                          return sup.log_value == -std::numeric_limits<double>::infinity() ? 0.0
                                                                                           : std::exp(sup.log_value);
                        },
                        [&](const DiagonalNode& d) {
                          double m = 0.0;
                          for (const auto& [k, v] : d.overrides) m = std::max(m, std::abs(v));
                          if (!u.is_finite() || u.dim > static_cast<Index>(d.overrides.size()))
                            m = std::max(m, std::abs(d.tail));
                          return std::pow(m, static_cast<double>(n));
                        },
                        [&](const ScalarNode& s) {
                          return std::pow(std::abs(s.lambda), static_cast<double>(n)) * power_norm_exact(s.inner, n, p);
                        },
                        [&](const DirectSumNode& d) {
                          double m = 0.0;
                          for (const auto& part : d.parts) m = std::max(m, power_norm_exact(part, n, p));
                          return m;
                        },
                        [&](const auto&) -> double { return dense_power_norm(spec, n, p); },
                    },
                    spec.node().v);
}

Index power_norm_attaining_index(const OperatorSpec& spec, Index n) {
  const auto* s = std::get_if<ShiftNode>(&spec.node().v);
  if (!s) throw UnsupportedError("attaining index is defined for shifts only");
  if (n < 1) throw ParameterError("power must be >= 1");
  const ShiftSup sup = shift_sup(*s, spec.universe(), n);
  if (!sup.start) throw IndeterminateError("supremum is not attained");
  return s->dir == ShiftDirection::Forward ? *sup.start : *sup.start + n - 1;
}

NormSeq power_norms(const OperatorSpec& spec, std::span<const Index> ns, double p) {
  NormSeq seq;
  seq.kind = NormKind::OperatorNorm;
  seq.p = p;
  if (dense_route(spec)) {
    if (p != 2.0) throw ParameterError("finite-matrix power norms are only available for p = 2");
    if (!spec.finite_dimensional())
      throw UnsupportedError("no exact power norm for " + spec.describe() + "; use orbit probes for lower bounds");
    const DenseMatrix a = to_dense(spec);
    DenseMatrix pw = DenseMatrix::identity(a.rows());
    Index k = 0;
    for (Index n : ns) {
      if (n < k) throw DomainError("norm sequence indices must be strictly increasing");
      for (; k < n; ++k) pw = pw * a;
      seq.push(n, largest_singular_value(pw));
    }
    return seq;
  }
  for (Index n : ns) seq.push(n, power_norm_exact(spec, n, p));
  return seq;
}

NormSeq orbit_norms(const OperatorSpec& spec, const SparseVec& x, double p, Index N) {
  if (N < 1) throw ParameterError("orbit length must be >= 1");
  NormSeq seq;
  seq.kind = NormKind::VectorOrbit;
  seq.p = p;
  SparseVec y = x;
  seq.push(0, p_norm(y, p));
  for (Index n = 1; n <= N; ++n) {
    y = apply(spec, y);
    seq.push(n, p_norm(y, p));
  }
  return seq;
}

SparseVec cesaro_apply(const OperatorSpec& spec, const SparseVec& x, Index n) {
  if (n < 0) throw ParameterError("Cesaro index must be >= 0");
  OrbitSum sum(spec.universe(), 2.0);
  SparseVec y = x;
  sum.add(y);
  for (Index k = 1; k <= n; ++k) {
    y = apply(spec, y);
    sum.add(y);
  }
  return sum.divided(static_cast<double>(n + 1));
}

std::vector<double> cesaro_operator_norms(const DenseMatrix& a, Complex lambda, Index N) {
  if (N < 0) throw ParameterError("Cesaro index must be >= 0");
  const DenseMatrix la = lambda * a;
  DenseMatrix pw = DenseMatrix::identity(a.rows());
  DenseMatrix sum = pw;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(N + 1));
  out.push_back(1.0);
  for (Index n = 1; n <= N; ++n) {
    pw = pw * la;
    sum += pw;
    out.push_back(largest_singular_value(sum) / static_cast<double>(n + 1));
  }
  return out;
}

std::vector<double> power_operator_norms(const DenseMatrix& a, Index N) {
  DenseMatrix pw = DenseMatrix::identity(a.rows());
  std::vector<double> out{1.0};
  for (Index n = 1; n <= N; ++n) {
    pw = pw * a;
    out.push_back(largest_singular_value(pw));
  }
  return out;
}

double cesaro_operator_norm(const OperatorSpec& spec, Index n, Complex lambda) {
  if (!spec.finite_dimensional())
    throw UnsupportedError("Cesaro operator norms need a finite-dimensional operator");
  if (n < 0) throw ParameterError("Cesaro index must be >= 0");
  return cesaro_operator_norms(to_dense(spec), lambda, n).back();
}

double media_residual(const OperatorSpec& spec, const SparseVec& x, Index n, double p) {
  if (n < 1) throw ParameterError("media identity needs n >= 1");
  const double nd = static_cast<double>(n);
  const SparseVec lhs = (1.0 / (nd + 1.0)) * power_apply(spec, x, n);
  const SparseVec rhs = cesaro_apply(spec, x, n) - (nd / (nd + 1.0)) * cesaro_apply(spec, x, n - 1);
  return p_norm(lhs - rhs, p);
}

double block_tz_power_check(const OperatorSpec& inner, const SparseVec& x, Index n) {
  if (n < 1) throw ParameterError("block power check needs n >= 1");
  const OperatorSpec big = OperatorSpec::block_tz(inner);
  const int nb = inner.universe().blocks;
  const SparseVec x1 = x.blocks_slice(0, nb);
  const SparseVec x2 = x.blocks_slice(nb, nb);
  const SparseVec tn1_x2 = power_apply(inner, x2, n - 1);
  const SparseVec tn_x2 = apply(inner, tn1_x2);
  const SparseVec top = power_apply(inner, x1, n) + static_cast<double>(n) * (tn_x2 - tn1_x2);
  const SparseVec closed = top.embedded(big.universe(), 0) + tn_x2.embedded(big.universe(), nb);
  return p_norm(power_apply(big, x, n) - closed, 2.0);
}

}  // namespace opdyn
