#include <doctest.h>

#include <cmath>

#include "opdyn/core.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"
#include "opdyn/operator.hpp"
#include "opdyn/polynomial.hpp"
#include "opdyn/probes.hpp"
#include "opdyn/weights.hpp"

using namespace opdyn;

namespace {

const IndexUniverse N1 = IndexUniverse::nat();

SparseVec random_vec(const IndexUniverse& u, Rng& rng, int support) {
  std::vector<Entry> es;
  for (const auto& k : canonical_keys(u, static_cast<std::size_t>(support))) es.push_back({k, rng.complex_normal()});
  return SparseVec::from_entries(u, std::move(es));
}

double rel_diff(const SparseVec& a, const SparseVec& b) {
  const double scale = std::max(1.0, std::max(p_norm(a, 2.0), p_norm(b, 2.0)));
  return p_norm(a - b, 2.0) / scale;
}

std::vector<OperatorSpec> sample_specs() {
  return {
      OperatorSpec::backward_shift(N1, WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne)),
      OperatorSpec::forward_shift(N1, WeightRule::power_ratio(0.4, RatioForm::KPlusOneOverK)),
      OperatorSpec::forward_shift(N1, WeightRule::poly_ratio(Polynomial({1.0, 0.0, 1.0}))),
      OperatorSpec::bilateral_shift(WeightRule::constant()),
      OperatorSpec::diagonal(N1, {{1, Complex(0.0, 1.0)}, {3, 2.0}}, Complex(0.5, 0.5)),
      OperatorSpec::finite_matrix(DenseMatrix::from_rows({{-1.0, 2.0}, {0.0, -1.0}})),
      OperatorSpec::block_tz(OperatorSpec::bilateral_shift(WeightRule::constant())),
      OperatorSpec::scalar_multiple(Complex(0.0, 2.0), OperatorSpec::identity(N1)),
      OperatorSpec::diag_plus_nilpotent(4, 2, std::polar(1.0, 1.0), std::polar(1.0, std::sqrt(2.0))),
  };
}

}  // namespace

TEST_CASE("make_vector drops zeros, sums duplicates and checks the universe") {
  SparseVec e1 = make_vector(N1, {{1, 1.0}});
  CHECK(e1 == basis_vector(N1, 1));
  CHECK(make_vector(N1, {{1, 1.0}, {1, -1.0}}).empty());
  CHECK_THROWS_AS(make_vector(IndexUniverse::finite(2), {{3, 1.0}}), DomainError);
  CHECK_THROWS_AS(make_vector(N1, {{0, 1.0}}), DomainError);
  CHECK_NOTHROW(make_vector(IndexUniverse::integers(), {{-5, 1.0}}));
}

TEST_CASE("non-finite scalars are rejected") {
  CHECK_THROWS_AS(make_vector(N1, {{1, Complex(std::nan(""), 0.0)}}), DomainError);
  CHECK_THROWS_AS(checked(Complex(0.0, INFINITY)), DomainError);
}

TEST_CASE("p_norm") {
  CHECK(p_norm(adversarial_vector(4, 2.0), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p_norm(basis_vector(N1, 1), 1.0) == 1.0);
  CHECK(p_norm(make_vector(N1, {{1, 1.0}, {2, 1.0}}), 2.0) == doctest::Approx(1.4142135624).epsilon(1e-10));
  CHECK(p_norm(SparseVec(N1), 2.0) == 0.0);
  CHECK_THROWS_AS(p_norm(basis_vector(N1, 1), 0.5), ParameterError);
  // Entries near the overflow threshold still give finite norms.
  CHECK(std::isfinite(p_norm(make_vector(N1, {{1, 1e300}, {2, 1e300}}), 2.0)));
}

TEST_CASE("inner product") {
  const auto e1 = basis_vector(N1, 1), e2 = basis_vector(N1, 2);
  CHECK(inner(e1, e1) == Complex(1.0, 0.0));
  CHECK(inner(e1, e2) == Complex(0.0, 0.0));
  CHECK(inner(Complex(1.0, 1.0) * e1, e1) == Complex(1.0, 1.0));
  CHECK_THROWS_AS(inner(e1, basis_vector(IndexUniverse::integers(), 1)), DomainError);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_vec(N1, rng, 10), y = random_vec(N1, rng, 12);
    CHECK(std::abs(inner(x, y) - std::conj(inner(y, x))) < 1e-14);
  }
}

TEST_CASE("weight_at") {
  const auto pr = WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne);
  CHECK(weight_at(pr, 2) == doctest::Approx(1.1892071).epsilon(1e-7));
  CHECK(weight_at(WeightRule::poly_ratio(Polynomial({0.0, 1.0})), 1) == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK_THROWS_AS(WeightRule::poly_ratio(Polynomial({0.0, -1.0})), ConstructionError);
  try {
    (void)WeightRule::poly_ratio(Polynomial({-3.0, 1.0}));
    FAIL("expected a construction error");
  } catch (const ConstructionError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("apply on the defining examples") {
  const auto b = OperatorSpec::backward_shift(N1, WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne));
  const auto img = apply(b, basis_vector(N1, 2));
  CHECK(img.support_size() == 1);
  CHECK(std::abs(img.coeff(1) - std::pow(2.0, 0.25)) < 1e-15);
  CHECK(apply(b, basis_vector(N1, 1)).empty());

  const auto two = OperatorSpec::sum({OperatorSpec::forward_shift(N1, WeightRule::constant()),
                                      OperatorSpec::diagonal(N1, {{1, 1.0}}, 0.0)});
  CHECK(apply(two, basis_vector(N1, 1)) == make_vector(N1, {{1, 1.0}, {2, 1.0}}));
  CHECK_THROWS_AS(apply(b, basis_vector(IndexUniverse::integers(), 0)), DomainError);
}

TEST_CASE("apply is additive and homogeneous") {
  Rng rng(11);
  for (const auto& s : sample_specs()) {
    const auto& u = s.universe();
    for (int i = 0; i < 10; ++i) {
      const auto x = random_vec(u, rng, 6), y = random_vec(u, rng, 6);
      const Complex c = rng.complex_normal();
      CHECK(rel_diff(apply(s, x + y), apply(s, x) + apply(s, y)) < 1e-12);
      CHECK(rel_diff(apply(s, c * x), c * apply(s, x)) < 1e-12);
    }
  }
}

TEST_CASE("shift images match closed-form weights") {
  const auto rules = {WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne),
                      WeightRule::power_ratio(0.4, RatioForm::KPlusOneOverK),
                      WeightRule::poly_ratio(Polynomial({1.0, 0.0, 1.0})),
                      WeightRule::explicit_weights({2.0, 0.5, 3.0}, 1.5)};
  for (const auto& r : rules) {
    const auto b = OperatorSpec::backward_shift(N1, r);
    const bool fwd_ok = r.valid_at(1);
    if (!fwd_ok) CHECK_THROWS_AS(OperatorSpec::forward_shift(N1, r), ConstructionError);
    for (Index k = 2; k < 60; ++k) {
      const double w = r.at(k);
      CHECK(std::abs(apply(b, basis_vector(N1, k)).coeff(k - 1) - w) <= 1e-14 * w);
      if (fwd_ok)
        CHECK(std::abs(apply(OperatorSpec::forward_shift(N1, r), basis_vector(N1, k)).coeff(k + 1) - w) <= 1e-14 * w);
    }
  }
}

TEST_CASE("adjoint") {
  const auto f = OperatorSpec::forward_shift(N1, WeightRule::power_ratio(0.4, RatioForm::KPlusOneOverK));
  const auto fa = adjoint(f);
  for (Index k = 1; k < 30; ++k) {
    // <T e_k, e_{k+1}> = <e_k, T* e_{k+1}>
    const Complex lhs = inner(apply(f, basis_vector(N1, k)), basis_vector(N1, k + 1));
    const Complex rhs = inner(basis_vector(N1, k), apply(fa, basis_vector(N1, k + 1)));
    CHECK(std::abs(lhs - rhs) < 1e-14);
  }
  const auto d = adjoint(OperatorSpec::diagonal(N1, {}, Complex(0.0, 1.0)));
  CHECK(apply(d, basis_vector(N1, 3)).coeff(3) == Complex(0.0, -1.0));
  const auto m = to_dense(adjoint(OperatorSpec::finite_matrix(DenseMatrix::from_rows({{-1.0, 2.0}, {0.0, -1.0}}))));
  CHECK(m == DenseMatrix::from_rows({{-1.0, 0.0}, {2.0, -1.0}}));
  CHECK_THROWS_AS(adjoint(OperatorSpec::block_tz(OperatorSpec::identity(N1))), UnsupportedError);
  CHECK_THROWS_AS(adjoint(OperatorSpec::diag_plus_nilpotent(4, 2, 1.0, 1.0)), UnsupportedError);
}

TEST_CASE("adjoint is an involution on basis vectors") {
  std::vector<OperatorSpec> specs = {
      OperatorSpec::backward_shift(N1, WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne)),
      OperatorSpec::forward_shift(N1, WeightRule::poly_ratio(Polynomial({0.0, 1.0}))),
      OperatorSpec::bilateral_shift(WeightRule::poly_ratio(Polynomial({1.0, 0.0, 1.0}), true)),
      OperatorSpec::diagonal(N1, {{2, Complex(1.0, 2.0)}}, Complex(0.0, -1.0)),
      OperatorSpec::scalar_multiple(Complex(0.5, 0.5), OperatorSpec::forward_shift(N1, WeightRule::constant(2.0))),
      OperatorSpec::direct_sum({OperatorSpec::identity(N1), OperatorSpec::forward_shift(N1, WeightRule::constant())}),
  };
  for (const auto& s : specs) {
    const auto aa = adjoint(adjoint(s));
    for (const auto& k : canonical_keys(s.universe(), 12)) {
      const auto e = basis_vector(s.universe(), k.pos, k.block);
      CHECK(max_abs_diff(apply(aa, e), apply(s, e)) < 1e-14);
    }
  }
}

TEST_CASE("scale") {
  const auto s = OperatorSpec::backward_shift(N1, WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne));
  const auto e3 = basis_vector(N1, 3);
  CHECK(apply(scale(1.0, s), e3) == apply(s, e3));
  CHECK(apply(scale(Complex(0.0, 1.0), OperatorSpec::identity(N1)), basis_vector(N1, 1)).coeff(1) == Complex(0.0, 1.0));
  Rng rng(3);
  for (const auto& spec : sample_specs()) {
    const auto x = random_vec(spec.universe(), rng, 8);
    const Complex lam = std::polar(1.0, rng.uniform() * 6.0);
    const double a = p_norm(apply(scale(lam, spec), x), 2.0);
    const double b = p_norm(apply(spec, x), 2.0);
    CHECK(std::abs(a - b) <= 1e-15 * std::max(1.0, b) * 4);
  }
}

TEST_CASE("block operator acts on (top, bottom) pairs") {
  const auto U = OperatorSpec::bilateral_shift(WeightRule::constant());
  const auto T = OperatorSpec::block_tz(U);
  CHECK(T.universe().blocks == 2);
  // [[U, U-I],[0, U]] (0 (+) e0) = ((U - I) e0, U e0) = (e1 - e0, e1)
  const auto img = apply(T, basis_vector(T.universe(), 0, 1));
  CHECK(img.coeff(1, 0) == Complex(1.0, 0.0));
  CHECK(img.coeff(0, 0) == Complex(-1.0, 0.0));
  CHECK(img.coeff(1, 1) == Complex(1.0, 0.0));
  CHECK(img.support_size() == 3);
}

TEST_CASE("diagonal plus nilpotent structure") {
  const Complex l1 = std::polar(1.0, 1.0), l2 = std::polar(1.0, std::sqrt(2.0));
  const auto m = to_dense(OperatorSpec::diag_plus_nilpotent(5, 2, l1, l2));
  CHECK(m(0, 0) == l1);
  CHECK(m(0, 1) == l1 - 1.0);
  CHECK(m(2, 3) == l2 - 1.0);
  CHECK(m(4, 4) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(OperatorSpec::diag_plus_nilpotent(4, 3, l1, l2), ParameterError);
}

TEST_CASE("polynomial basics") {
  const Polynomial p({1.0, 0.0, 1.0});
  CHECK(p.degree() == 2);
  CHECK(p(3.0) == 10.0);
  CHECK(Polynomial({1.0, 0.0, 0.0}).degree() == 0);
  CHECK(Polynomial().degree() == -1);
  CHECK(p.shifted(1.0)(2.0) == p(3.0));
  CHECK(p.derivative()(2.0) == 4.0);
}

TEST_CASE("formatting is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_complex(Complex(1.0, -2.0)) == "1-2i");
  CHECK(format_complex(Complex(0.0, 0.0)) == "0");
}

TEST_CASE("seeded probes are reproducible") {
  ProbeConfig cfg;
  const auto a = probe_vectors(N1, cfg);
  const auto b = probe_vectors(N1, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].vec == b[i].vec);
  }
  for (const auto& pv : a) CHECK(p_norm(pv.vec, cfg.p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(adversarial_vector(3, 2.0), ParameterError);
  ProbeConfig bad;
  bad.lambda_samples = 3;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}
