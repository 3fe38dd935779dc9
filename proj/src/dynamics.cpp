#include "opdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "opdyn/errors.hpp"
#include "opdyn/powers.hpp"
#include "opdyn/summation.hpp"

namespace opdyn {

namespace {

constexpr double kMixingTol = 1e-2;

bool is_pow2(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Largest power of two not exceeding N.
Index dyadic_floor(Index N) {
  Index m = 1;
  while (m <= N / 2) m *= 2;
  return m;
}

double explicit_log_product(const ExplicitWeights& w, Index lo, Index hi) {
  // Sum of log weights over base indices lo..hi.
  const Index head_lo = w.first;
  const Index head_hi = w.first + static_cast<Index>(w.head.size()) - 1;
  const Index a = std::max(lo, head_lo);
  const Index b = std::min(hi, head_hi);
  CompensatedSum acc;
  Index in_head = 0;
  for (Index j = a; j <= b; ++j, ++in_head) acc.add(std::log(w.head[static_cast<std::size_t>(j - w.first)]));
  acc.add(static_cast<double>(hi - lo + 1 - in_head) * std::log(w.tail));
  return acc.value();
}

}  // namespace

double inverse_weight_product(const WeightRule& rule, Index n) {
  const Index k0 = rule.first_valid_index();
  if (n < k0) return 1.0;
  const Index a = k0 + rule.offset();
  const Index b = n + rule.offset();
  const auto& base = rule.base();
  if (const auto* pr = std::get_if<PowerRatio>(&base)) {
    if (pr->form == RatioForm::KOverKMinusOne)
      return std::pow(static_cast<double>(b) / static_cast<double>(a - 1), -pr->alpha);
    return std::pow(static_cast<double>(b + 1) / static_cast<double>(a), -pr->alpha);
  }
  if (const auto* pp = std::get_if<PolyRatio>(&base))
    return std::sqrt(pp->p(static_cast<double>(a)) / pp->p(static_cast<double>(b + 1)));
  return std::exp(-explicit_log_product(std::get<ExplicitWeights>(base), a, b));
}

MixingReport mixing_criterion_backward_shift(const WeightRule& rule, Index N) {
  if (N < 1) throw ParameterError("N must be >= 1");
  MixingReport r;
  for (Index n = 1; n <= N; n *= 2) {
    r.inverse_products.emplace_back(n, inverse_weight_product(rule, n));
    if (n > N / 2) break;
  }
  const auto& ip = r.inverse_products;
  bool monotone = true;
  for (std::size_t i = 1; i < ip.size(); ++i)
    if (ip[i].second > ip[i - 1].second) monotone = false;
  r.mixing_evidence = monotone && ip.back().second < kMixingTol && ip.back().second < ip.front().second;
  return r;
}

std::string to_string(ChaosClass c) {
  switch (c) {
    case ChaosClass::Chaotic: return "chaotic";
    case ChaosClass::MixingOnly: return "mixing_only";
    case ChaosClass::Neither: return "neither";
  }
  return "?";
}

Summability summability_witness(const Polynomial& p, Index horizon) {
  if (horizon < 1) throw ParameterError("summability horizon must be >= 1");
  Summability s;
  s.horizon = horizon;
  const double p1 = p(1.0);
  CompensatedSum acc;
  for (Index n = 1; n <= horizon; ++n) acc.add(p1 / p(static_cast<double>(n + 1)));
  s.partial_sum = acc.value();
  s.tail_bound = std::numeric_limits<double>::infinity();
  const int d = p.degree();
  if (d < 2) return s;
  // p(m) >= L m^d for m > horizon, then compare with the integral of m^{-d}.
  const auto& c = p.coeffs();
  const double h1 = static_cast<double>(horizon + 1);
  double L = c.back();
  for (int i = 0; i < d; ++i) L -= std::abs(c[static_cast<std::size_t>(i)]) * std::pow(h1, i - d);
  if (L <= 0.0) return s;
  s.tail_bound = std::abs(p1) / (L * (d - 1) * std::pow(h1, d - 1));
  s.converges = true;
  return s;
}

ChaosReport chaos_criterion_shift_adjoint(const Polynomial& p, ShiftSide side) {
  const bool bilateral = side == ShiftSide::Bilateral;
  if (bilateral && p.degree() % 2 != 0)
    throw ConstructionError("bilateral strict m-isometric shifts need odd m; got m = " +
                            std::to_string(p.degree() + 1));
  (void)WeightRule::poly_ratio(p, bilateral);  // positivity on the index set
  ChaosReport r;
  r.degree = p.degree();
  r.strict_order = r.degree + 1;
  r.verdict = r.degree >= 2 ? ChaosClass::Chaotic : r.degree == 1 ? ChaosClass::MixingOnly : ChaosClass::Neither;
  if (!bilateral) r.summability = summability_witness(p);
  return r;
}

CoverageReport hypercyclicity_probe(const OperatorSpec& spec, const SparseVec& x, const SparseVec& y, Index N,
                                    double R, double cell) {
  if (N < 1) throw ParameterError("N must be >= 1");
  if (!(R > 0.0) || !(cell > 0.0)) throw ParameterError("R and cell must be positive");
  CoverageReport r;
  r.R = R;
  r.cell = cell;
  r.cells_per_axis = static_cast<Index>(std::ceil(2.0 * R / cell));
  const double total = static_cast<double>(r.cells_per_axis) * static_cast<double>(r.cells_per_axis);
  const auto bin = [&](double t) {
    return std::min(static_cast<Index>(std::floor((t + R) / cell)), r.cells_per_axis - 1);
  };
  std::set<std::pair<Index, Index>> hits;
  SparseVec v = x;
  Index next_mark = 1;
  for (Index n = 0; n <= N; ++n) {
    if (n) v = apply(spec, v);
    const Complex z = inner(v, y);
    r.orbit_magnitude_max = std::max(r.orbit_magnitude_max, std::abs(z));
    if (std::abs(z.real()) <= R && std::abs(z.imag()) <= R) hits.insert({bin(z.real()), bin(z.imag())});
    if (n == next_mark || n == N) {
      r.curve.emplace_back(n, static_cast<double>(hits.size()) / total);
      if (n == next_mark) next_mark *= 10;
    }
  }
  r.hits.assign(hits.begin(), hits.end());
  r.coverage_fraction = static_cast<double>(hits.size()) / total;
  r.N_used = N;
  return r;
}

Index circle_cell_count(double R, double cell, double radius) {
  const Index m = static_cast<Index>(std::ceil(2.0 * R / cell));
  Index count = 0;
  for (Index i = 0; i < m; ++i) {
    const double x0 = -R + static_cast<double>(i) * cell, x1 = x0 + cell;
    const double nx = (x0 <= 0.0 && 0.0 <= x1) ? 0.0 : std::min(std::abs(x0), std::abs(x1));
    const double fx = std::max(std::abs(x0), std::abs(x1));
    for (Index j = 0; j < m; ++j) {
      const double y0 = -R + static_cast<double>(j) * cell, y1 = y0 + cell;
      const double ny = (y0 <= 0.0 && 0.0 <= y1) ? 0.0 : std::min(std::abs(y0), std::abs(y1));
      const double fy = std::max(std::abs(y0), std::abs(y1));
      if (std::hypot(nx, ny) <= radius && radius <= std::hypot(fx, fy)) ++count;
    }
  }
  return count;
}

std::string to_string(ErgodicMode m) { return m == ErgodicMode::Mean ? "mean" : "weak"; }

std::string to_string(ErgodicOutcome o) {
  switch (o) {
    case ErgodicOutcome::Converged: return "converged";
    case ErgodicOutcome::Diverged: return "diverged";
    case ErgodicOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

ErgodicOutcome cauchy_outcome(const std::vector<std::pair<Index, double>>& gaps, double limit_size) {
  if (gaps.size() < 3) return ErgodicOutcome::Inconclusive;
  const std::size_t k = gaps.size();
  const double g1 = gaps[k - 3].second, g2 = gaps[k - 2].second, g3 = gaps[k - 1].second;
  if (g1 >= g2 && g2 >= g3 && g3 < 1e-6 * (1.0 + limit_size)) return ErgodicOutcome::Converged;
  double mx = 0.0;
  for (const auto& g : gaps) mx = std::max(mx, g.second);
  if (std::min({g1, g2, g3}) >= 0.1 * mx) return ErgodicOutcome::Diverged;
  return ErgodicOutcome::Inconclusive;
}

ErgodicVerdict mean_ergodic_probe(const OperatorSpec& spec, const SparseVec& x, Index N, double p) {
  if (N < 8) throw ParameterError("ergodic probes need N >= 8");
  const Index last = dyadic_floor(N);
  ErgodicVerdict r;
  r.mode = ErgodicMode::Mean;
  r.horizon = last;
  if (apply(spec, x) == x) {
    // Fixed vector: every mean is x, so all gaps vanish exactly.
    for (Index n = 1; 2 * n <= last; n *= 2) r.gaps.emplace_back(n, 0.0);
    r.limit = Complex(p_norm(x, p), 0.0);
    r.outcome = cauchy_outcome(r.gaps, std::abs(r.limit));
    return r;
  }
  OrbitSum sum(spec.universe(), p);
  SparseVec v = x;
  SparseVec mean_m, mean_odd;  // M_m and M_{2m-1}
  for (Index k = 0; k <= last; ++k) {
    if (k && !v.empty()) v = apply(spec, v);
    if (!v.empty()) sum.add(v);
    const bool at_pow = is_pow2(k);
    const bool at_odd = k >= 1 && is_pow2(k + 1);
    if (!at_pow && !at_odd) continue;
    SparseVec mean = sum.divided(static_cast<double>(k + 1));
    if (at_pow && k >= 2) {
      SparseVec a = mean;
      a -= mean_m;
      SparseVec b = mean_odd;
      b -= mean_m;
      r.gaps.emplace_back(k / 2, std::max(p_norm(a, p), p_norm(b, p)));
    }
    if (at_odd) mean_odd = mean;
    if (at_pow) mean_m = std::move(mean);
  }
  r.limit = Complex(p_norm(mean_m, p), 0.0);
  for (const auto& [n, g] : r.gaps) r.rate = std::max(r.rate, static_cast<double>(n) * g);
  r.witness_gap = r.gaps.back().second;
  r.outcome = cauchy_outcome(r.gaps, std::abs(r.limit));
  return r;
}

ErgodicVerdict weak_ergodic_probe(const OperatorSpec& spec, const SparseVec& x, const SparseVec& y, Index N) {
  if (N < 8) throw ParameterError("ergodic probes need N >= 8");
  const Index last = dyadic_floor(N);
  ErgodicVerdict r;
  r.mode = ErgodicMode::Weak;
  r.horizon = last;
  if (apply(spec, x) == x) {
    for (Index n = 1; 2 * n <= last; n *= 2) r.gaps.emplace_back(n, 0.0);
    r.limit = inner(x, y);
    r.outcome = cauchy_outcome(r.gaps, std::abs(r.limit));
    return r;
  }
  CompensatedComplexSum acc;
  std::map<Index, Complex> means;
  SparseVec v = x;
  for (Index k = 0; k <= last; ++k) {
    if (k && !v.empty()) v = apply(spec, v);
    if (!v.empty()) acc.add(inner(v, y));
    if (is_pow2(k) || (k >= 1 && is_pow2(k + 1))) means[k] = acc.value() / static_cast<double>(k + 1);
  }
  for (Index n = 1; 2 * n <= last; n *= 2) {
    const double g = std::max(std::abs(means[2 * n] - means[n]), std::abs(means[2 * n - 1] - means[n]));
    r.gaps.emplace_back(n, g);
  }
  r.limit = means[last];
  for (Index n = 1; n < last; n *= 2)
    r.rate = std::max(r.rate, static_cast<double>(n) * std::abs(means[n] - r.limit));
  r.witness_gap = r.gaps.back().second;
  r.outcome = cauchy_outcome(r.gaps, std::abs(r.limit));
  return r;
}

}  // namespace opdyn
