#include "opdyn/isometry.hpp"

#include <algorithm>
#include <cmath>

#include "opdyn/errors.hpp"
#include "opdyn/powers.hpp"

namespace opdyn {

namespace {

constexpr double kDegreeTol = 1e-9;
constexpr int kWindowCap = 512;

std::vector<double> norm_squares(const OperatorSpec& spec, const SparseVec& x, int count) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(count));
  SparseVec y = x;
  for (int k = 0; k < count; ++k) {
    if (k) y = apply(spec, y);
    const double n = p_norm(y, 2.0);
    s.push_back(n * n);
  }
  return s;
}

double binomial(int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

}  // namespace

double forward_difference(const std::vector<double>& s, int m) {
  if (m < 0 || static_cast<std::size_t>(m) >= s.size()) throw ParameterError("not enough terms for difference");
  double acc = 0.0;
  for (int k = 0; k <= m; ++k) acc += ((m - k) % 2 ? -1.0 : 1.0) * binomial(m, k) * s[static_cast<std::size_t>(k)];
  return acc;
}

double defect(const OperatorSpec& spec, const SparseVec& x, int m) {
  if (m < 1) throw ParameterError("defect needs m >= 1");
  return forward_difference(norm_squares(spec, x, m + 1), m);
}

IsometryReport is_m_isometry(const OperatorSpec& spec, int m, const ProbeConfig& cfg) {
  if (m < 1) throw ParameterError("m must be >= 1");
  ProbeConfig c = cfg;
  c.adversarial = false;
  c.p = 2.0;
  const auto probes = probe_vectors(spec.universe(), c);
  IsometryReport r;
  r.m_tested = m;
  for (const auto& pv : probes) {
    const auto s = norm_squares(spec, pv.vec, m + 1);
    const double scale = *std::max_element(s.begin(), s.end());
    if (scale == 0.0) continue;
    const double d = forward_difference(s, m);
    const double rel = std::abs(d) / scale;
    r.max_defect = std::max(r.max_defect, std::abs(d));
    if (r.witness.empty() || rel > r.max_relative_defect) {
      r.max_relative_defect = rel;
      r.witness = pv.label;
      r.witness_defect = d;
    }
  }
  r.holds = r.max_relative_defect < cfg.tolerance;
  return r;
}

IsometryReport strict_order_report(const OperatorSpec& spec, int m_max, const ProbeConfig& cfg) {
  if (m_max < 1) throw ParameterError("m_max must be >= 1");
  IsometryReport last;
  IsometryReport prev;
  for (int m = 1; m <= m_max; ++m) {
    IsometryReport r = is_m_isometry(spec, m, cfg);
    if (r.holds) {
      r.strict_order = m;
      if (m > 1) {
        r.witness = prev.witness;
        r.witness_defect = prev.witness_defect;
      }
      last = r;
      break;
    }
    prev = r;
    last = r;
  }
  ProbeConfig c = cfg;
  c.random_count = 0;
  c.adversarial = false;
  for (const auto& pv : probe_vectors(spec.universe(), c)) {
    std::optional<int> d;
    try {
      d = norm_square_degree(spec, pv.vec);
    } catch (const IndeterminateError&) {
    }
    last.degree_profile.emplace_back(pv.label, d);
  }
  return last;
}

std::optional<int> strict_order(const OperatorSpec& spec, int m_max, const ProbeConfig& cfg) {
  for (int m = 1; m <= m_max; ++m)
    if (is_m_isometry(spec, m, cfg).holds) return m;
  return std::nullopt;
}

int norm_square_degree(const OperatorSpec& spec, const SparseVec& x, int window) {
  if (window < 8) throw ParameterError("degree window must be >= 8");
  for (int w = window;; w *= 2) {
    w = std::min(w, kWindowCap);
    std::vector<double> s = norm_squares(spec, x, w);
    const double scale = *std::max_element(s.begin(), s.end());
    if (scale == 0.0) return -1;
    const double tol = kDegreeTol * scale;
    // Keep at least three samples in the last difference row.
    for (int d = 0; d + 1 <= w - 3; ++d) {
      std::vector<double> next(s.size() - 1);
      for (std::size_t i = 0; i + 1 < s.size(); ++i) next[i] = s[i + 1] - s[i];
      double mx = 0.0;
      for (double v : next) mx = std::max(mx, std::abs(v));
      if (mx <= tol) return d;
      s = std::move(next);
    }
    if (w >= kWindowCap)
      throw IndeterminateError("no stable polynomial degree for ||T^n x||^2 within " + std::to_string(w) + " points");
  }
}

OperatorSpec shift_from_polynomial(const Polynomial& p, ShiftDirection dir, IndexUniverse u) {
  WeightRule rule = WeightRule::poly_ratio(p, u.kind == UniverseKind::AllIntegers);
  if (dir == ShiftDirection::Forward) return OperatorSpec::shift(ShiftDirection::Forward, u, rule);
  return OperatorSpec::shift(ShiftDirection::Backward, u, rule.shifted(-1));
}

double covariance_form(const OperatorSpec& spec, const SparseVec& x) {
  const int d = norm_square_degree(spec, x);
  if (d > 2) throw DomainError("||T^n x||^2 has degree " + std::to_string(d) + "; not a 3-isometry orbit");
  if (d < 2) return 0.0;
  return 0.5 * forward_difference(norm_squares(spec, x, 3), 2);
}

CovarianceProbe covariance_injectivity_probe(const OperatorSpec& spec, int basis_count) {
  if (basis_count < 1) throw ParameterError("basis_count must be >= 1");
  CovarianceProbe out;
  double largest = 0.0;
  std::vector<ProbeVector> zero;
  for (const auto& k : canonical_keys(spec.universe(), static_cast<std::size_t>(basis_count))) {
    std::string label = "e" + std::to_string(k.pos);
    if (spec.universe().blocks > 1) label += "@" + std::to_string(k.block);
    SparseVec v = basis_vector(spec.universe(), k.pos, k.block);
    const double f = covariance_form(spec, v);
    out.forms.emplace_back(label, f);
    largest = std::max(largest, std::abs(f));
    if (std::abs(f) <= kDegreeTol) zero.push_back({label, std::move(v)});
  }
  out.identically_zero = largest <= kDegreeTol;
  if (!zero.empty()) out.kernel_witness = zero.front();
  out.injective_evidence = zero.empty();
  return out;
}

}  // namespace opdyn
