#include "opdyn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"

namespace opdyn {

std::string to_string(BoundClass c) {
  switch (c) {
    case BoundClass::PowerBounded: return "power_bounded";
    case BoundClass::CesaroBounded: return "cesaro_bounded";
    case BoundClass::AbsolutelyCesaroBounded: return "absolutely_cesaro_bounded";
    case BoundClass::UniformlyKreiss: return "uniformly_kreiss";
    case BoundClass::StronglyKreiss: return "strongly_kreiss";
    case BoundClass::Kreiss: return "kreiss";
    case BoundClass::Growth: return "growth";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::BoundedUpTo: return "bounded_up_to";
    case Outcome::Violated: return "violated";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Certainty c) { return c == Certainty::Exact ? "exact" : "probe"; }

std::string to_string(Trend t) {
  switch (t) {
    case Trend::DecreasingToZero: return "decreasing_to_zero";
    case Trend::Bounded: return "bounded";
    case Trend::Growing: return "growing";
  }
  return "?";
}

Outcome divergence_outcome(const std::vector<std::pair<double, double>>& curve, double factor) {
  if (curve.size() < 2) return Outcome::Inconclusive;
  auto first = std::find_if(curve.begin(), curve.end(), [](const auto& c) { return c.second > 0.0; });
  if (first == curve.end()) return Outcome::BoundedUpTo;
  const double last = curve.back().second;
  const double prev = curve[curve.size() - 2].second;
  if (last >= factor * first->second && last > prev) return Outcome::Violated;
  return Outcome::BoundedUpTo;
}

std::vector<Index> power_checkpoints(Index n_max) {
  std::vector<Index> out;
  for (Index n = 1; n <= std::min<Index>(64, n_max); ++n) out.push_back(n);
  for (Index n = 128; n <= n_max; n *= 2) out.push_back(n);
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

std::vector<Index> dyadic_checkpoints(Index n_max) {
  std::vector<Index> out;
  for (Index n = 1; n <= n_max; n *= 2) out.push_back(n);
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

std::vector<Complex> lambda_grid(int samples) {
  if (samples < 4) throw ParameterError("lambda grid needs at least 4 samples");
  std::vector<Complex> out;
  for (int k = 0; k < samples; ++k) {
    if (k == 0) {
      out.emplace_back(1.0, 0.0);
    } else if (2 * k == samples) {
      out.emplace_back(-1.0, 0.0);
    } else {
      out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / samples));
    }
  }
  if (samples % 2 != 0) out.emplace_back(-1.0, 0.0);
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> echo(const ProbeConfig& cfg) {
  return {
      {"adversarial", cfg.adversarial ? "true" : "false"},
      {"basis_count", std::to_string(cfg.basis_count)},
      {"divergence_factor", format_double(cfg.divergence_factor)},
      {"n_max", std::to_string(cfg.n_max)},
      {"p", format_double(cfg.p)},
      {"random_count", std::to_string(cfg.random_count)},
      {"random_support", std::to_string(cfg.random_support)},
      {"seed", format_seed(cfg.seed)},
  };
}

// Per-n maxima over probes, with the probe that attained each.
struct Tracker {
  explicit Tracker(Index n_max) : best(static_cast<std::size_t>(n_max + 1), 0.0), who(best.size(), -1) {}
  void offer(Index n, double v, int probe, std::optional<Complex> lambda = std::nullopt) {
    auto i = static_cast<std::size_t>(n);
    if (v > best[i]) {
      best[i] = v;
      who[i] = probe;
      if (lambda) lam[i] = *lambda;
    }
  }
  std::vector<double> best;
  std::vector<int> who;
  std::map<std::size_t, Complex> lam;
};

void finish_from_tracker(ClassVerdict& v, const Tracker& t, const std::vector<Index>& checkpoints,
                         const std::vector<std::string>& labels, double factor, Index start) {
  double run = 0.0;
  std::size_t arg = static_cast<std::size_t>(start);
  std::size_t next = 0;
  for (Index n = start; n < static_cast<Index>(t.best.size()); ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (t.best[i] > run) {
      run = t.best[i];
      arg = i;
    }
    while (next < checkpoints.size() && checkpoints[next] == n) {
      v.curve.emplace_back(static_cast<double>(n), run);
      ++next;
    }
  }
  v.best_constant = run;
  v.outcome = divergence_outcome(v.curve, factor);
  if (t.who[arg] >= 0) {
    Witness w{labels[static_cast<std::size_t>(t.who[arg])], static_cast<double>(arg), run, std::nullopt};
    if (auto it = t.lam.find(arg); it != t.lam.end()) w.lambda = it->second;
    v.witness = w;
  }
}

std::vector<std::string> labels_of(const std::vector<ProbeVector>& probes) {
  std::vector<std::string> out;
  for (const auto& p : probes) out.push_back(p.label);
  return out;
}

ClassVerdict exact_curve_verdict(BoundClass cls, const std::vector<std::pair<Index, double>>& values,
                                 const std::vector<Index>& checkpoints, double factor,
                                 std::optional<Complex> lambda = std::nullopt) {
  ClassVerdict v;
  v.class_name = cls;
  v.certainty = Certainty::Exact;
  double run = 0.0;
  Index arg = values.empty() ? 0 : values.front().first;
  std::size_t next = 0;
  for (const auto& [n, val] : values) {
    if (val > run) {
      run = val;
      arg = n;
    }
    while (next < checkpoints.size() && checkpoints[next] == n) {
      v.curve.emplace_back(static_cast<double>(n), run);
      ++next;
    }
  }
  v.best_constant = run;
  v.outcome = divergence_outcome(v.curve, factor);
  v.witness = Witness{"operator", static_cast<double>(arg), run, lambda};
  return v;
}

}  // namespace

ClassVerdict acb_constant(const OperatorSpec& spec, const ProbeConfig& cfg) {
  cfg.validate();
  const auto probes = probe_vectors(spec.universe(), cfg);
  const Index N = cfg.n_max;
  Tracker t(N);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double scale = p_norm(probes[i].vec, cfg.p);
    if (scale == 0.0) continue;
    SparseVec y = probes[i].vec;
    CompensatedSum sum;
    for (Index j = 1; j <= N; ++j) {
      y = apply(spec, y);
      if (y.empty()) break;
      sum.add(p_norm(y, cfg.p));
      t.offer(j, sum.value() / (static_cast<double>(j) * scale), static_cast<int>(i));
    }
  }
  ClassVerdict v;
  v.class_name = BoundClass::AbsolutelyCesaroBounded;
  v.certainty = Certainty::Probe;
  v.horizon = N;
  v.parameters = echo(cfg);
  finish_from_tracker(v, t, dyadic_checkpoints(N), labels_of(probes), cfg.divergence_factor, 1);
  return v;
}

ClassVerdict power_bounded_probe(const OperatorSpec& spec, const ProbeConfig& cfg) {
  cfg.validate();
  const Index N = cfg.n_max;
  const auto checkpoints = power_checkpoints(N);
  try {
    const NormSeq seq = power_norms(spec, checkpoints, cfg.p);
    ClassVerdict v = exact_curve_verdict(BoundClass::PowerBounded, seq.entries, checkpoints, cfg.divergence_factor);
    v.horizon = N;
    v.parameters = {{"n_max", std::to_string(N)}, {"p", format_double(cfg.p)}};
    return v;
  } catch (const UnsupportedError&) {
  }
  const auto probes = probe_vectors(spec.universe(), cfg);
  Tracker t(N);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double scale = p_norm(probes[i].vec, cfg.p);
    if (scale == 0.0) continue;
    SparseVec y = probes[i].vec;
    for (Index n = 1; n <= N; ++n) {
      y = apply(spec, y);
      if (y.empty()) break;
      t.offer(n, p_norm(y, cfg.p) / scale, static_cast<int>(i));
    }
  }
  ClassVerdict v;
  v.class_name = BoundClass::PowerBounded;
  v.certainty = Certainty::Probe;
  v.horizon = N;
  v.parameters = echo(cfg);
  finish_from_tracker(v, t, dyadic_checkpoints(N), labels_of(probes), cfg.divergence_factor, 1);
  return v;
}

namespace {

// sup over probes of ||M_n(lambda T) x|| for every lambda in the grid.
ClassVerdict cesaro_probe_sweep(BoundClass cls, const OperatorSpec& spec, const ProbeConfig& cfg,
                                const std::vector<Complex>& grid) {
  const auto probes = probe_vectors(spec.universe(), cfg);
  const Index N = cfg.n_max;
  Tracker t(N);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double scale = p_norm(probes[i].vec, cfg.p);
    if (scale == 0.0) continue;
    std::vector<OrbitSum> sums(grid.size(), OrbitSum(spec.universe(), cfg.p));
    std::vector<Complex> pw(grid.size(), Complex(1.0, 0.0));
    SparseVec y = probes[i].vec;
    for (Index n = 0; n <= N; ++n) {
      if (n > 0) {
        y = apply(spec, y);
        if (y.empty()) break;
        for (std::size_t j = 0; j < grid.size(); ++j) {
          pw[j] *= grid[j];
          pw[j] /= std::abs(pw[j]);
        }
      }
      for (std::size_t j = 0; j < grid.size(); ++j) {
        sums[j].add(y, pw[j]);
        t.offer(n, sums[j].norm() / (static_cast<double>(n + 1) * scale), static_cast<int>(i),
                grid.size() > 1 ? std::optional<Complex>(grid[j]) : std::nullopt);
      }
    }
  }
  ClassVerdict v;
  v.class_name = cls;
  v.certainty = Certainty::Probe;
  v.horizon = N;
  v.parameters = echo(cfg);
  finish_from_tracker(v, t, dyadic_checkpoints(N), labels_of(probes), cfg.divergence_factor, 0);
  return v;
}

ClassVerdict cesaro_exact_sweep(BoundClass cls, const OperatorSpec& spec, const ProbeConfig& cfg,
                                const std::vector<Complex>& grid) {
  const DenseMatrix a = to_dense(spec);
  const Index N = cfg.n_max;
  std::vector<std::pair<Index, double>> best(static_cast<std::size_t>(N + 1));
  std::vector<Complex> arg_lambda(best.size(), grid.front());
  for (Index n = 0; n <= N; ++n) best[static_cast<std::size_t>(n)] = {n, 0.0};
  for (const Complex& lam : grid) {
    const auto norms = cesaro_operator_norms(a, lam, N);
    for (std::size_t n = 0; n < norms.size(); ++n)
      if (norms[n] > best[n].second) {
        best[n].second = norms[n];
        arg_lambda[n] = lam;
      }
  }
  auto checkpoints = dyadic_checkpoints(N);
  ClassVerdict v = exact_curve_verdict(cls, best, checkpoints, cfg.divergence_factor);
  if (grid.size() > 1 && v.witness) v.witness->lambda = arg_lambda[static_cast<std::size_t>(v.witness->at)];
  v.horizon = N;
  v.parameters = {{"n_max", std::to_string(N)}, {"p", "2"}};
  return v;
}

}  // namespace

ClassVerdict cesaro_bounded_probe(const OperatorSpec& spec, const ProbeConfig& cfg) {
  cfg.validate();
  const std::vector<Complex> one{Complex(1.0, 0.0)};
  if (spec.finite_dimensional() && cfg.p == 2.0) return cesaro_exact_sweep(BoundClass::CesaroBounded, spec, cfg, one);
  return cesaro_probe_sweep(BoundClass::CesaroBounded, spec, cfg, one);
}

ClassVerdict uniform_kreiss_probe(const OperatorSpec& spec, const ProbeConfig& cfg) {
  cfg.validate();
  const auto grid = lambda_grid(cfg.lambda_samples);
  ClassVerdict v = spec.finite_dimensional() && cfg.p == 2.0
                       ? cesaro_exact_sweep(BoundClass::UniformlyKreiss, spec, cfg, grid)
                       : cesaro_probe_sweep(BoundClass::UniformlyKreiss, spec, cfg, grid);
  // A finite lambda grid cannot certify the whole circle.
  v.certainty = Certainty::Probe;
  v.parameters.emplace_back("lambda_samples", std::to_string(cfg.lambda_samples));
  std::sort(v.parameters.begin(), v.parameters.end());
  return v;
}

double resolvent_scaled_norm(const DenseMatrix& a, Complex lambda) {
  DenseMatrix m = lambda * DenseMatrix::identity(a.rows());
  m -= a;
  return (std::abs(lambda) - 1.0) * largest_singular_value(inverse(m));
}

std::vector<double> default_deltas() {
  std::vector<double> d;
  for (int k = 1; k <= 16; ++k) d.push_back(std::ldexp(1.0, -k));
  return d;
}

ClassVerdict kreiss_resolvent_constant(const OperatorSpec& spec, std::vector<double> deltas, int arg_samples) {
  if (!spec.finite_dimensional()) throw UnsupportedError("resolvent probe needs a finite-dimensional operator");
  if (deltas.empty()) throw ParameterError("delta grid is empty");
  for (double d : deltas)
    if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("deltas must be positive");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  const DenseMatrix a = to_dense(spec);
  const auto grid = lambda_grid(arg_samples);
  ClassVerdict v;
  v.class_name = BoundClass::Kreiss;
  v.certainty = Certainty::Probe;
  v.horizon = static_cast<Index>(deltas.size());
  v.parameters = {{"arg_samples", std::to_string(arg_samples)},
                  {"delta_max", format_double(deltas.front())},
                  {"delta_min", format_double(deltas.back())}};
  double overall = 0.0;
  for (double d : deltas) {
    double sup = 0.0;
    Complex arg{};
    for (const Complex& u : grid) {
      const Complex lam = (1.0 + d) * u;
      double val;
      try {
        val = resolvent_scaled_norm(a, lam);
      } catch (const SingularMatrixError&) {
        v.outcome = Outcome::Violated;
        v.best_constant = std::numeric_limits<double>::infinity();
        v.witness = Witness{"singular resolvent", d, std::numeric_limits<double>::infinity(), lam};
        return v;
      }
      if (val > sup) {
        sup = val;
        arg = lam;
      }
    }
    v.curve.emplace_back(d, sup);
    if (sup > overall) {
      overall = sup;
      v.witness = Witness{"resolvent", d, sup, arg};
    }
  }
  v.best_constant = overall;
  const double first = v.curve.front().second;
  const double last = v.curve.back().second;
  const bool rising = v.curve.size() >= 2 && last > v.curve[v.curve.size() - 2].second;
  v.outcome = (last >= 5.0 * first && rising) ? Outcome::Violated : Outcome::BoundedUpTo;
  return v;
}

std::vector<double> default_radii() { return {1.0, 2.0, 4.0, 8.0, 16.0}; }

ClassVerdict strong_kreiss_exp_probe(const OperatorSpec& spec, std::vector<double> radii, int arg_samples) {
  if (!spec.finite_dimensional()) throw UnsupportedError("exponential probe needs a finite-dimensional operator");
  if (radii.empty()) throw ParameterError("radius list is empty");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("radii must be positive");
  std::sort(radii.begin(), radii.end());
  const DenseMatrix a = to_dense(spec);
  const auto grid = lambda_grid(arg_samples);
  ClassVerdict v;
  v.class_name = BoundClass::StronglyKreiss;
  v.certainty = Certainty::Probe;
  v.horizon = static_cast<Index>(radii.size());
  v.parameters = {{"arg_samples", std::to_string(arg_samples)}, {"radius_max", format_double(radii.back())}};
  double overall = 0.0;
  for (double r : radii) {
    double sup = 0.0;
    Complex arg{};
    for (const Complex& u : grid) {
      const Complex z = r * u;
      const double val = largest_singular_value(expm(z * a)) * std::exp(-r);
      if (val > sup) {
        sup = val;
        arg = z;
      }
    }
    v.curve.emplace_back(r, sup);
    if (sup > overall) {
      overall = sup;
      v.witness = Witness{"exponential", r, sup, arg};
    }
  }
  v.best_constant = overall;
  v.outcome = divergence_outcome(v.curve, 2.0);
  return v;
}

namespace {

std::vector<std::pair<double, double>> usable(const NormSeq& seq) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, val] : seq.entries) {
    if (n < 2) continue;
    if (!(val > 0.0)) throw DomainError("growth analysis needs positive values (n=" + std::to_string(n) + ")");
    pts.emplace_back(static_cast<double>(n), val);
  }
  if (pts.size() < 8) throw ParameterError("growth analysis needs at least 8 entries with n >= 2");
  return pts;
}

}  // namespace

double growth_exponent(const NormSeq& seq) {
  const auto pts = usable(seq);
  const double top = std::log2(pts.back().first);
  std::vector<std::pair<double, double>> fit;
  for (const auto& [n, v] : pts)
    if (std::log2(n) >= top / 2.0) fit.emplace_back(std::log(n), std::log(v));
  if (fit.size() < 2) throw ParameterError("growth analysis needs at least two points in the upper range");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(fit.size());
  my /= static_cast<double>(fit.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : fit) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw ParameterError("growth analysis needs distinct n values");
  return sxy / sxx;
}

Trend ratio_trend(const NormSeq& seq, double beta) {
  const auto pts = usable(seq);
  std::vector<double> ratios;
  for (const auto& [n, v] : pts) {
    const auto ni = static_cast<std::uint64_t>(n);
    if ((ni & (ni - 1)) == 0) ratios.push_back(v / std::pow(n, beta));
  }
  if (ratios.size() < 2) throw ParameterError("ratio trend needs at least two dyadic entries");
  const double first = ratios.front();
  const double last = ratios.back();
  if (last < 0.1 * first) return Trend::DecreasingToZero;
  if (last > 2.0 * first) return Trend::Growing;
  return Trend::Bounded;
}

}  // namespace opdyn
