#include <doctest.h>

#include <cmath>

#include "opdyn/classify.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/zoo.hpp"
#include "oracles.hpp"

using namespace opdyn;

namespace {

const IndexUniverse N1 = IndexUniverse::nat();

OperatorSpec assani_matrix() { return OperatorSpec::finite_matrix(DenseMatrix::from_rows({{-1.0, 2.0}, {0.0, -1.0}})); }
OperatorSpec bshift(double a) { return OperatorSpec::backward_shift(N1, WeightRule::power_ratio(a, RatioForm::KOverKMinusOne)); }
OperatorSpec fshift(double a) { return OperatorSpec::forward_shift(N1, WeightRule::power_ratio(a, RatioForm::KPlusOneOverK)); }

ProbeConfig small_cfg(Index n_max) {
  ProbeConfig cfg;
  cfg.n_max = n_max;
  return cfg;
}

DenseMatrix from_eigen(const oracle::Mat& m) {
  DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

oracle::Mat random_unitary(Rng& rng, Eigen::Index n) {
  oracle::Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<oracle::Mat> qr(g);
  return qr.householderQ() * oracle::Mat::Identity(n, n);
}

NormSeq seq_of(const std::vector<std::pair<Index, double>>& es) {
  NormSeq s;
  for (const auto& [n, v] : es) s.push(n, v);
  return s;
}

}  // namespace

TEST_CASE("checkpoint helpers") {
  const auto d = dyadic_checkpoints(100);
  CHECK(d.front() == 1);
  CHECK(d.back() == 100);
  const auto g = lambda_grid(64);
  CHECK(g.size() == 64);
  bool has_minus_one = false, has_one = false;
  for (auto z : g) {
    has_one = has_one || std::abs(z - 1.0) < 1e-15;
    has_minus_one = has_minus_one || std::abs(z + 1.0) < 1e-15;
  }
  CHECK(has_one);
  CHECK(has_minus_one);
  CHECK(divergence_outcome({{1, 1.0}, {2, 1.5}, {4, 2.5}}, 2.0) == Outcome::Violated);
  CHECK(divergence_outcome({{1, 1.0}, {2, 2.5}, {4, 2.5}}, 2.0) == Outcome::BoundedUpTo);
}

TEST_CASE("acb_constant") {
  const auto v = acb_constant(bshift(0.25), small_cfg(4096));
  CHECK(v.outcome == Outcome::BoundedUpTo);
  CHECK(v.best_constant <= std::sqrt(6.0));
  CHECK(v.certainty == Certainty::Probe);

  ProbeConfig cfg = small_cfg(10000);
  const auto f = acb_constant(fshift(0.4), cfg);
  CHECK(f.outcome == Outcome::Violated);
  REQUIRE(f.witness.has_value());
  double direct = 0.0;
  for (int n = 1; n <= 10000; ++n) direct += std::pow(n + 1.0, 0.4);
  direct /= 10000.0;
  CHECK(direct == doctest::Approx(28.4).epsilon(0.01));
  CHECK(f.best_constant >= direct * (1 - 1e-9));

  const auto id = acb_constant(OperatorSpec::identity(N1), small_cfg(256));
  CHECK(id.outcome == Outcome::BoundedUpTo);
  CHECK(id.best_constant == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("acb_constant is monotone in the horizon and the probe set") {
  const auto s = bshift(0.25);
  double prev = 0.0;
  for (Index n : {64, 256, 1024}) {
    const double c = acb_constant(s, small_cfg(n)).best_constant;
    CHECK(c >= prev);
    prev = c;
  }
  ProbeConfig few = small_cfg(512);
  few.random_count = 2;
  ProbeConfig more = few;
  more.random_count = 8;
  CHECK(acb_constant(s, more).best_constant >= acb_constant(s, few).best_constant);
}

TEST_CASE("power_bounded_probe") {
  const auto b = power_bounded_probe(bshift(0.25), small_cfg(4096));
  CHECK(b.outcome == Outcome::Violated);
  CHECK(b.certainty == Certainty::Exact);
  CHECK(b.best_constant == doctest::Approx(std::pow(4097.0, 0.25)).epsilon(1e-12));

  const auto u = OperatorSpec::diagonal(N1, {{1, std::polar(1.0, 2.0)}}, Complex(0.0, 1.0));
  const auto uv = power_bounded_probe(u, small_cfg(1000));
  CHECK(uv.outcome == Outcome::BoundedUpTo);
  CHECK(uv.best_constant == doctest::Approx(1.0));

  CHECK(power_bounded_probe(assani_matrix(), small_cfg(1000)).outcome == Outcome::Violated);
}

TEST_CASE("cesaro_bounded_probe") {
  const auto a = cesaro_bounded_probe(assani_matrix(), small_cfg(10000));
  CHECK(a.outcome == Outcome::BoundedUpTo);
  CHECK(a.certainty == Certainty::Exact);
  // Oracle: direct summation at a few n.
  const auto A = oracle::to_eigen(to_dense(assani_matrix()));
  double sup = 0.0;
  for (long n : {0L, 1L, 2L, 3L, 10L, 99L, 100L}) sup = std::max(sup, oracle::cesaro_norm(A, n, 1.0));
  CHECK(a.best_constant >= sup * (1 - 1e-10));
  CHECK(a.best_constant <= 3.0);

  ProbeConfig nc = small_cfg(1 << 15);
  CHECK(cesaro_bounded_probe(bshift(0.5), nc).outcome == Outcome::Violated);

  const auto id = cesaro_bounded_probe(OperatorSpec::identity(N1), small_cfg(256));
  CHECK(id.outcome == Outcome::BoundedUpTo);
  CHECK(id.best_constant == doctest::Approx(1.0));
}

TEST_CASE("uniform_kreiss_probe") {
  ProbeConfig cfg = small_cfg(2048);
  const auto f = uniform_kreiss_probe(fshift(0.4), cfg);
  CHECK(f.outcome == Outcome::BoundedUpTo);
  CHECK(f.best_constant < 10.0);

  const auto a = uniform_kreiss_probe(assani_matrix(), small_cfg(4096));
  CHECK(a.outcome == Outcome::Violated);
  REQUIRE(a.witness.has_value());
  REQUIRE(a.witness->lambda.has_value());
  CHECK(std::abs(*a.witness->lambda + 1.0) < 1e-12);

  const auto id = uniform_kreiss_probe(OperatorSpec::identity(N1), small_cfg(128));
  CHECK(id.outcome == Outcome::BoundedUpTo);
  CHECK(id.best_constant <= 1.0 + 1e-12);
}

TEST_CASE("uniform Kreiss constant dominates the Cesaro constant") {
  std::vector<OperatorSpec> specs = {fshift(0.4), lambda_block(std::polar(1.0, 1.0)).spec, OperatorSpec::identity(N1)};
  for (const auto& s : specs) {
    const auto cfg = small_cfg(512);
    CHECK(uniform_kreiss_probe(s, cfg).best_constant >= cesaro_bounded_probe(s, cfg).best_constant * (1 - 1e-12));
  }
}

TEST_CASE("kreiss_resolvent_constant") {
  const auto A = oracle::to_eigen(to_dense(assani_matrix()));
  const double r = resolvent_scaled_norm(to_dense(assani_matrix()), -(1.0 + 1e-3));
  CHECK(r == doctest::Approx(oracle::scaled_resolvent(A, -(1.0 + 1e-3))).epsilon(1e-9));
  CHECK(r == doctest::Approx(2e3).epsilon(0.01));
  CHECK(kreiss_resolvent_constant(assani_matrix(), default_deltas(), 64).outcome == Outcome::Violated);

  const auto one = OperatorSpec::finite_matrix(DenseMatrix::identity(1));
  const auto v1 = kreiss_resolvent_constant(one, default_deltas(), 16);
  CHECK(v1.outcome == Outcome::BoundedUpTo);
  CHECK(v1.best_constant == doctest::Approx(1.0).epsilon(1e-9));

  const auto zero = OperatorSpec::finite_matrix(DenseMatrix(3, 3));
  const auto v0 = kreiss_resolvent_constant(zero, default_deltas(), 16);
  CHECK(v0.outcome == Outcome::BoundedUpTo);
  CHECK(v0.best_constant <= 1.0);
  CHECK_THROWS_AS(kreiss_resolvent_constant(zero, {0.1, -1.0}, 16), ParameterError);
}

TEST_CASE("kreiss constant is invariant under unitary conjugation") {
  Rng rng(21);
  std::vector<DenseMatrix> mats = {to_dense(assani_matrix()), to_dense(lambda_block(std::polar(1.0, 1.0)).spec),
                                   DenseMatrix::from_rows({{0.5, 1.0, 0.0}, {0.0, 0.2, 0.3}, {0.0, 0.0, -0.4}})};
  for (const auto& m : mats) {
    const auto base = kreiss_resolvent_constant(OperatorSpec::finite_matrix(m), {1.0, 0.5, 0.25, 0.125}, 16).best_constant;
    for (int t = 0; t < 3; ++t) {
      const auto Q = random_unitary(rng, static_cast<Eigen::Index>(m.rows()));
      const auto conj = from_eigen(Q * oracle::to_eigen(m) * Q.adjoint());
      const auto c = kreiss_resolvent_constant(OperatorSpec::finite_matrix(conj), {1.0, 0.5, 0.25, 0.125}, 16).best_constant;
      CHECK(std::abs(c - base) <= 1e-9 * std::max(1.0, base));
    }
  }
}

TEST_CASE("strong_kreiss_exp_probe") {
  const auto z = strong_kreiss_exp_probe(OperatorSpec::finite_matrix(DenseMatrix(2, 2)), default_radii(), 16);
  CHECK(z.outcome == Outcome::BoundedUpTo);
  CHECK(z.best_constant <= 1.0);
  const auto u = OperatorSpec::finite_matrix(to_dense(OperatorSpec::diagonal(IndexUniverse::finite(2), {{1, Complex(0.0, 1.0)}}, -1.0)));
  const auto uv = strong_kreiss_exp_probe(u, default_radii(), 16);
  CHECK(uv.outcome == Outcome::BoundedUpTo);
  CHECK(uv.best_constant <= 1.0 + 1e-12);
  const auto av = strong_kreiss_exp_probe(assani_matrix(), default_radii(), 16);
  CHECK(av.outcome == Outcome::Violated);
  // Closed form: e^{zT} = e^{-z} [[1, 2z],[0, 1]], so at z = -r the scaled norm is
  // the largest singular value of [[1,-2r],[0,1]].
  const double r = 16.0;
  const double s = std::sqrt(1.0 + r * r) + r;
  CHECK(av.best_constant >= s * (1 - 1e-6));
}

TEST_CASE("growth_exponent") {
  for (double a : {0.1, 0.25, 0.4}) {
    NormSeq s;
    for (Index n = 1; n <= (1 << 14); ++n) s.push(n, power_norm_exact(bshift(a), n, 2.0));
    CHECK(std::abs(growth_exponent(s) - a) <= 0.01);
  }
  NormSeq c;
  for (Index n = 1; n <= 64; ++n) c.push(n, 3.0);
  CHECK(std::abs(growth_exponent(c)) <= 1e-9);
  const auto T = assani_matrix();
  const auto orb = orbit_norms(T, basis_vector(T.universe(), 2), 2.0, 1 << 12);
  CHECK(std::abs(growth_exponent(orb) - 1.0) <= 0.01);
  CHECK_THROWS(growth_exponent(seq_of({{2, 1.0}, {3, 1.0}})));
  NormSeq with_zero;
  for (Index n = 2; n <= 20; ++n) with_zero.push(n, n == 15 ? 0.0 : 1.0);
  CHECK_THROWS_AS(growth_exponent(with_zero), DomainError);
}

TEST_CASE("ratio_trend") {
  NormSeq b;
  for (Index n = 1; n <= (1 << 14); ++n) b.push(n, power_norm_exact(bshift(0.25), n, 2.0));
  CHECK(ratio_trend(b, 0.5) == Trend::DecreasingToZero);
  const auto T = assani_matrix();
  CHECK(ratio_trend(orbit_norms(T, basis_vector(T.universe(), 2), 2.0, 1 << 12), 1.0) == Trend::Bounded);
  NormSeq id;
  for (Index n = 1; n <= 256; ++n) id.push(n, 1.0);
  CHECK(ratio_trend(id, 0.0) == Trend::Bounded);
  CHECK(ratio_trend(orbit_norms(T, basis_vector(T.universe(), 2), 2.0, 1 << 12), 0.5) == Trend::Growing);
}
