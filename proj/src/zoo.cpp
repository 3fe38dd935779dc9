#include "opdyn/zoo.hpp"

#include <cmath>

#include "opdyn/classify.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"
#include "opdyn/isometry.hpp"

namespace opdyn {

namespace {

ProbeConfig desk_config() { return ProbeConfig{}; }

SparseVec unit(const OperatorSpec& s, Index pos, int block = 0) { return basis_vector(s.universe(), pos, block); }

}  // namespace

OperatorSpec jordan_identity_plus_nilpotent(int n) {
  if (n < 1) throw ParameterError("Jordan block size must be >= 1");
  DenseMatrix m = DenseMatrix::identity(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) m(i - 1, i) = 1.0;
  return OperatorSpec::finite_matrix(std::move(m));
}

ZooEntry assani() {
  ZooEntry e;
  e.id = "assani";
  e.description = "2x2 matrix [[-1,2],[0,-1]]";
  e.spec = OperatorSpec::finite_matrix(DenseMatrix::from_rows({{-1.0, 2.0}, {0.0, -1.0}}));
  e.expected = {
      {"cb", "bounded_up_to", "Cesaro means stay bounded"},
      {"me", "diverged", "not mean ergodic"},
      {"order", "3", "strict 3-isometry"},
      {"pb", "violated", "powers grow like 2n"},
  };
  e.notes = "T^n = [[(-1)^n, (-1)^{n-1} 2n], [0, (-1)^n]].";
  e.config = desk_config();
  e.ergodic_x = unit(e.spec, 2);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = unit(e.spec, 2);
  return e;
}

ZooEntry lambda_block(Complex lambda) {
  checked(lambda, "lambda");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw ParameterError("lambda must be unimodular");
  if (std::abs(lambda - 1.0) < 1e-12) throw ParameterError("lambda must differ from 1");
  ZooEntry e;
  e.id = "lambda-block";
  e.description = "2x2 matrix [[l, l-1],[0, l]] with l = " + format_complex(lambda);
  DenseMatrix m(2, 2);
  m(0, 0) = lambda;
  m(0, 1) = lambda - 1.0;
  m(1, 1) = lambda;
  e.spec = OperatorSpec::finite_matrix(std::move(m));
  e.expected = {
      {"cb", "bounded_up_to", "Cesaro means stay bounded"},
      {"me", "diverged", "not mean ergodic"},
      {"order", "3", "strict 3-isometry"},
  };
  e.notes = "||T^n e2||^2 = n^2 |l-1|^2 + 1.";
  e.config = desk_config();
  e.ergodic_x = unit(e.spec, 2);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = unit(e.spec, 2);
  return e;
}

ZooEntry acb_backward_shift(double p, double alpha) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0 / p)) throw ParameterError("alpha must lie in (0, 1/p)");
  ZooEntry e;
  e.id = "acb-bshift";
  e.description = "backward shift on l^" + format_double(p) + "(N), w_k = (k/(k-1))^" + format_double(alpha);
  WeightRule rule = WeightRule::power_ratio(alpha, RatioForm::KOverKMinusOne);
  e.spec = OperatorSpec::backward_shift(IndexUniverse::nat(), rule);
  e.shift_rule = rule;
  const double eps = 1.0 - alpha * p;
  e.expected = {
      {"acb", "bounded_up_to", "absolutely Cesaro bounded"},
      {"pb", "violated", "||T^n|| = (n+1)^alpha"},
      {"mixing", "mixing_evidence", "inverse weight products tend to 0"},
  };
  e.notes = "ACB constant at most (2(1/eps+1))^{1/p} = " + format_double(std::pow(2.0 * (1.0 / eps + 1.0), 1.0 / p)) +
            " with eps = 1 - alpha p.";
  e.config = desk_config();
  e.config.p = p;
  e.ergodic_x = unit(e.spec, 1);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = unit(e.spec, 1);
  return e;
}

ZooEntry forward_kreiss_shift(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ParameterError("alpha must lie in (0, 1/2)");
  ZooEntry e;
  e.id = "kreiss-fshift";
  e.description = "forward shift on l^2(N), w_k = ((k+1)/k)^" + format_double(alpha);
  e.spec = OperatorSpec::forward_shift(IndexUniverse::nat(), WeightRule::power_ratio(alpha, RatioForm::KPlusOneOverK));
  e.expected = {
      {"uk", "bounded_up_to", "uniformly Kreiss bounded"},
      {"acb", "violated", "not absolutely Cesaro bounded"},
  };
  e.notes = "||T^n u_1|| = (n+1)^alpha; the adjoint is the absolutely Cesaro bounded backward shift.";
  e.config = desk_config();
  e.ergodic_x = unit(e.spec, 1);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = unit(e.spec, 1);
  return e;
}

ZooEntry non_cesaro_backward_shift(double p) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  ZooEntry e;
  e.id = "noncesaro-bshift";
  e.description = "backward shift on l^" + format_double(p) + "(N), w_j = (j/(j-1))^{1/p}";
  WeightRule rule = WeightRule::power_ratio(1.0 / p, RatioForm::KOverKMinusOne);
  e.spec = OperatorSpec::backward_shift(IndexUniverse::nat(), rule);
  e.shift_rule = rule;
  e.expected = {{"cb", "violated", "||M_{n-1} x_n||^p grows like ln(n/2)"}};
  const double c = (p / (p + 1.0)) * (1.0 - std::pow(2.0, -(1.0 + 1.0 / p)));
  e.notes = "Adversarial x_n = n^{-1/p}(e_1+...+e_n); lower bound c^p ln(n/2), c = " + format_double(c) + ".";
  e.config = desk_config();
  e.config.p = p;
  e.config.n_max = Index{1} << 15;
  e.ergodic_x = unit(e.spec, 1);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = unit(e.spec, 1);
  return e;
}

ZooEntry two_isometry_embedding() {
  ZooEntry e;
  e.id = "two-isometry";
  e.description = "T(x1, x2, ...) = (x1, x1, x2, x3, ...)";
  const auto u = IndexUniverse::nat();
  e.spec = OperatorSpec::sum({OperatorSpec::forward_shift(u, WeightRule::constant()),
                              OperatorSpec::diagonal(u, {{1, Complex(1.0, 0.0)}}, Complex(0.0, 0.0))});
  e.expected = {
      {"order", "2", "strict 2-isometry"},
      {"cb", "violated", "Cesaro means grow like sqrt(n)"},
  };
  e.notes = "||T^n e1||^2 = n + 1.";
  e.config = desk_config();
  e.ergodic_x = unit(e.spec, 1);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = unit(e.spec, 1);
  return e;
}

ZooEntry block_tz(const OperatorSpec& inner, const std::string& tag) {
  ZooEntry e;
  e.id = "blocktz-" + tag;
  e.description = "[[T, T-I],[0, T]] with T = " + inner.describe();
  e.spec = OperatorSpec::block_tz(inner);
  e.notes = "Cesaro bounded iff T is power bounded.";
  e.config = desk_config();
  const IndexUniverse& iu = inner.universe();
  const Index first = iu.first_index();
  e.ergodic_x = unit(e.spec, first, 0);
  e.ergodic_y = unit(e.spec, first, 0);
  e.hc_vector = unit(e.spec, first, 0);
  return e;
}

ZooEntry diag_nilpotent_3isometry(int dim, int ell, Complex l1, Complex l2) {
  if (dim < 4) throw ParameterError("dim must be >= 4");
  if (ell < 2 || ell > dim - 2) throw ParameterError("ell must lie in [2, dim-2]");
  if (std::abs(std::abs(l1) - 1.0) > 1e-12 || std::abs(std::abs(l2) - 1.0) > 1e-12)
    throw ParameterError("lambda1 and lambda2 must be unimodular");
  ZooEntry e;
  e.id = dim == 4 && ell == 2 ? "hyper4" : "diagnil-" + std::to_string(dim) + "-" + std::to_string(ell);
  e.description = "D + Q(D - I) on C^" + std::to_string(dim) + ", ell = " + std::to_string(ell);
  e.spec = OperatorSpec::diag_plus_nilpotent(dim, ell, l1, l2);
  e.expected = {{"order", std::to_string(2 * ell - 1), "strict (2 ell - 1)-isometry"}};
  if (dim == 4 && ell == 2) {
    e.expected.push_back({"cb", "bounded_up_to", "Cesaro bounded"});
    e.expected.push_back({"hc", "increasing", "numerical range orbit keeps filling the plane"});
  }
  e.notes = "Diagonal (l1 x ell, l2, l2, 1, ...) plus the shifted nilpotent part.";
  e.config = desk_config();
  e.ergodic_x = unit(e.spec, 2);
  e.ergodic_y = unit(e.spec, 1);
  e.hc_vector = dim == 4 && ell == 2 ? balanced_hc_vector(l1, l2, 5) : unit(e.spec, 2);
  return e;
}

SparseVec balanced_hc_vector(Complex l1, Complex l2, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> x(4);
  for (auto& z : x) z = rng.complex_normal();
  const double c1 = std::abs((l1 - 1.0) * x[1] * std::conj(x[0]));
  const double c2 = std::abs((l2 - 1.0) * x[3] * std::conj(x[2]));
  if (c1 > 0.0 && c2 > 0.0) {
    const double t = std::sqrt(c1 / c2);
    x[2] *= t;
    x[3] *= t;
  }
  SparseVec v = from_dense_vector(IndexUniverse::finite(4), x);
  return Complex(1.0 / p_norm(v, 2.0), 0.0) * v;
}

std::vector<ZooEntry> zoo_entries() {
  std::vector<ZooEntry> out;
  out.push_back(assani());
  out.push_back(lambda_block(std::polar(1.0, 1.0)));
  out.push_back(acb_backward_shift(2.0, 0.25));
  out.push_back(forward_kreiss_shift(0.4));
  out.push_back(non_cesaro_backward_shift(2.0));
  out.push_back(two_isometry_embedding());

  ZooEntry bil = block_tz(OperatorSpec::bilateral_shift(WeightRule::constant()), "bilateral");
  bil.expected = {
      {"we", "converged", "weakly ergodic"},
      {"order", "3", "strict 3-isometry"},
      {"cb", "bounded_up_to", "Cesaro bounded"},
  };
  out.push_back(std::move(bil));

  for (int n : {2, 3}) {
    // Realized as a plain matrix of size 2n.
    ZooEntry j = block_tz(jordan_identity_plus_nilpotent(n), "jordan" + std::to_string(n));
    j.spec = OperatorSpec::finite_matrix(to_dense(j.spec));
    j.ergodic_x = unit(j.spec, 1);
    j.ergodic_y = unit(j.spec, 1);
    j.hc_vector = unit(j.spec, 1);
    j.expected = {
        {"order", std::to_string(2 * n - 1), "strict order from the Jordan block size"},
        {"cb", "violated", "inner operator is not power bounded"},
    };
    out.push_back(std::move(j));
  }

  ZooEntry id = block_tz(OperatorSpec::identity(IndexUniverse::nat()), "identity");
  id.expected = {
      {"pb", "bounded_up_to", "T - I = 0, so the block operator is the identity"},
      {"order", "1", "isometry"},
  };
  out.push_back(std::move(id));

  out.push_back(diag_nilpotent_3isometry());
  return out;
}

std::optional<ZooEntry> zoo_lookup(const std::string& id) {
  for (auto& e : zoo_entries())
    if (e.id == id) return e;
  return std::nullopt;
}

std::string run_named_probe(const ZooEntry& e, const std::string& probe, const ProbeConfig& cfg) {
  if (probe == "pb") return to_string(power_bounded_probe(e.spec, cfg).outcome);
  if (probe == "cb") return to_string(cesaro_bounded_probe(e.spec, cfg).outcome);
  if (probe == "acb") return to_string(acb_constant(e.spec, cfg).outcome);
  if (probe == "uk") return to_string(uniform_kreiss_probe(e.spec, cfg).outcome);
  if (probe == "kreiss") return to_string(kreiss_resolvent_constant(e.spec, default_deltas(), cfg.lambda_samples).outcome);
  if (probe == "sk") return to_string(strong_kreiss_exp_probe(e.spec, default_radii(), cfg.lambda_samples).outcome);
  if (probe == "me") return to_string(mean_ergodic_probe(e.spec, e.ergodic_x, kErgodicHorizon, cfg.p).outcome);
  if (probe == "we") return to_string(weak_ergodic_probe(e.spec, e.ergodic_x, e.ergodic_y, kErgodicHorizon).outcome);
  if (probe == "order") {
    const auto m = strict_order(e.spec, 7, cfg);
    return m ? std::to_string(*m) : "none";
  }
  if (probe == "mixing") {
    if (!e.shift_rule) throw UnsupportedError("mixing criterion needs a backward shift");
    return mixing_criterion_backward_shift(*e.shift_rule).mixing_evidence ? "mixing_evidence" : "fails";
  }
  if (probe == "hc") {
    const auto r = hypercyclicity_probe(e.spec, e.hc_vector, e.hc_vector, kCoverageHorizon);
    // Strict growth between the checkpoints from n = 1000 on.
    std::vector<double> tail;
    for (const auto& [n, f] : r.curve)
      if (n >= 1000) tail.push_back(f);
    bool up = tail.size() >= 2;
    for (std::size_t i = 1; i < tail.size(); ++i) up = up && tail[i] > tail[i - 1];
    return up ? "increasing" : "flat";
  }
  throw ParameterError("unknown probe '" + probe + "'");
}

std::vector<RowResult> check_expectations(const ZooEntry& e, const ProbeConfig& cfg) {
  std::vector<RowResult> out;
  for (const auto& row : e.expected) {
    RowResult r{row, run_named_probe(e, row.probe, cfg), false};
    r.match = r.actual == row.expected;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace opdyn
