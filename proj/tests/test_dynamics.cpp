#include <doctest.h>

#include <cmath>

#include "opdyn/dynamics.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/isometry.hpp"
#include "opdyn/zoo.hpp"

using namespace opdyn;

namespace {

const IndexUniverse N1 = IndexUniverse::nat();
const Complex L1 = std::polar(1.0, 1.0);
const Complex L2 = std::polar(1.0, std::sqrt(2.0));

OperatorSpec assani_matrix() { return OperatorSpec::finite_matrix(DenseMatrix::from_rows({{-1.0, 2.0}, {0.0, -1.0}})); }
OperatorSpec block_u() { return OperatorSpec::block_tz(OperatorSpec::bilateral_shift(WeightRule::constant())); }

// Product of w_1..w_n by direct multiplication.
double direct_inverse_product(const WeightRule& r, Index n) {
  double prod = 1.0;
  for (Index k = r.first_valid_index(); k <= n; ++k) prod *= r.at(k);
  return 1.0 / prod;
}

}  // namespace

TEST_CASE("inverse weight products") {
  const auto pr = WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne);
  const auto pp = WeightRule::poly_ratio(Polynomial({0.0, 1.0}));
  const auto ex = WeightRule::explicit_weights({2.0, 0.5, 3.0}, 1.25);
  for (Index n : {2, 3, 10, 100, 5000}) {
    CHECK(inverse_weight_product(pr, n) == doctest::Approx(std::pow(double(n), -0.25)).epsilon(1e-12));
    CHECK(inverse_weight_product(pr, n) == doctest::Approx(direct_inverse_product(pr, n)).epsilon(1e-11));
    CHECK(inverse_weight_product(pp, n) == doctest::Approx(1.0 / std::sqrt(double(n + 1))).epsilon(1e-12));
    CHECK(inverse_weight_product(ex, n) == doctest::Approx(direct_inverse_product(ex, n)).epsilon(1e-11));
  }
}

TEST_CASE("mixing_criterion_backward_shift") {
  CHECK(mixing_criterion_backward_shift(WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne)).mixing_evidence);
  const auto flat = mixing_criterion_backward_shift(WeightRule::constant());
  CHECK_FALSE(flat.mixing_evidence);
  for (const auto& [n, v] : flat.inverse_products) CHECK(v == 1.0);
  CHECK(mixing_criterion_backward_shift(WeightRule::poly_ratio(Polynomial({0.0, 1.0}))).mixing_evidence);
}

TEST_CASE("chaos_criterion_shift_adjoint") {
  const auto c = chaos_criterion_shift_adjoint(Polynomial({0.0, 0.0, 1.0}), ShiftSide::Unilateral);
  CHECK(c.verdict == ChaosClass::Chaotic);
  CHECK(c.strict_order == 3);
  REQUIRE(c.summability.has_value());
  CHECK(c.summability->converges);
  // sum_{n>=1} 1/(n+1)^2 = pi^2/6 - 1
  const double total = M_PI * M_PI / 6.0 - 1.0;
  CHECK(c.summability->partial_sum <= total);
  CHECK(total - c.summability->partial_sum <= c.summability->tail_bound);
  CHECK(summability_witness(Polynomial({0.0, 0.0, 1.0}), 1000).tail_bound < 1e-3);

  CHECK(chaos_criterion_shift_adjoint(Polynomial({0.0, 1.0}), ShiftSide::Unilateral).verdict == ChaosClass::MixingOnly);
  CHECK_FALSE(chaos_criterion_shift_adjoint(Polynomial({0.0, 1.0}), ShiftSide::Unilateral).summability->converges);
  CHECK(chaos_criterion_shift_adjoint(Polynomial({1.0}), ShiftSide::Unilateral).verdict == ChaosClass::Neither);
  CHECK(chaos_criterion_shift_adjoint(Polynomial({1.0, 0.0, 1.0}), ShiftSide::Bilateral).verdict == ChaosClass::Chaotic);
  CHECK_THROWS_AS(chaos_criterion_shift_adjoint(Polynomial({1.0, 1.0}), ShiftSide::Bilateral), ConstructionError);
  CHECK_THROWS_AS(chaos_criterion_shift_adjoint(Polynomial({-5.0, 1.0}), ShiftSide::Unilateral), ConstructionError);
}

TEST_CASE("chaos and mixing criteria agree") {
  for (const auto& c : std::vector<std::vector<double>>{{0.0, 1.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}}) {
    const Polynomial p(c);
    CHECK(chaos_criterion_shift_adjoint(p, ShiftSide::Unilateral).verdict != ChaosClass::Neither);
    // The adjoint of the forward polynomial shift is a backward shift with the same weights.
    CHECK(mixing_criterion_backward_shift(WeightRule::poly_ratio(p)).mixing_evidence);
  }
}

TEST_CASE("hypercyclicity_probe") {
  const auto id = OperatorSpec::identity(N1);
  const auto e1 = basis_vector(N1, 1);
  const auto r = hypercyclicity_probe(id, e1, e1, 1000);
  CHECK(r.hits.size() == 1);

  const auto d = OperatorSpec::diagonal(N1, {}, L1);
  const auto rc = hypercyclicity_probe(d, e1, e1, 20000);
  CHECK(rc.hits.size() <= static_cast<std::size_t>(circle_cell_count(40.0, 1.0, 1.0)));
  CHECK(rc.orbit_magnitude_max == doctest::Approx(1.0));

  const auto h = diag_nilpotent_3isometry();
  const auto u = h.spec.universe();
  const auto x = (0.5 * (basis_vector(u, 1) + basis_vector(u, 2) + basis_vector(u, 3) + basis_vector(u, 4)));
  CHECK(p_norm(x, 2.0) == doctest::Approx(1.0));
  const auto big = hypercyclicity_probe(h.spec, x, x, 100000);
  double prev = -1.0;
  for (const auto& [n, f] : big.curve) {
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(big.coverage_fraction == doctest::Approx(double(big.hits.size()) / double(big.cells_per_axis * big.cells_per_axis)));
  const auto small = hypercyclicity_probe(h.spec, x, x, 1000);
  CHECK(big.hits.size() >= small.hits.size());
}

TEST_CASE("mean_ergodic_probe") {
  const auto T = assani_matrix();
  const auto a = mean_ergodic_probe(T, basis_vector(T.universe(), 2), 1 << 12);
  CHECK(a.outcome == ErgodicOutcome::Diverged);
  CHECK(a.witness_gap > 0.5);

  Rng rng(3);
  const auto x = random_unit_vector(N1, rng, 8, 2.0);
  const auto id = mean_ergodic_probe(OperatorSpec::identity(N1), x, 1 << 10);
  CHECK(id.outcome == ErgodicOutcome::Converged);
  CHECK(id.rate == 0.0);

  const auto b = OperatorSpec::backward_shift(N1, WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne));
  const auto bv = mean_ergodic_probe(b, basis_vector(N1, 1), 1 << 20);
  CHECK(bv.outcome == ErgodicOutcome::Converged);
  CHECK(std::abs(bv.limit) < 1e-5);
  CHECK_THROWS_AS(mean_ergodic_probe(b, basis_vector(N1, 1), 4), ParameterError);
}

TEST_CASE("weak_ergodic_probe") {
  const auto bu = block_u();
  const auto u = bu.universe();
  const auto e00 = basis_vector(u, 0, 0);
  const auto w = weak_ergodic_probe(bu, e00, e00, 1 << 20);
  CHECK(w.outcome == ErgodicOutcome::Converged);
  CHECK(std::abs(w.limit) < 1e-5);
  // <M_n x, y> = 1/(n+1) exactly.
  CHECK(w.rate <= 1.0 + 1e-12);

  const auto T = assani_matrix();
  const auto a = weak_ergodic_probe(T, basis_vector(T.universe(), 2), basis_vector(T.universe(), 1), 1 << 12);
  CHECK(a.outcome == ErgodicOutcome::Diverged);

  Rng rng(6);
  const auto x = random_unit_vector(N1, rng, 8, 2.0), y = random_unit_vector(N1, rng, 8, 2.0);
  CHECK(weak_ergodic_probe(OperatorSpec::identity(N1), x, y, 1 << 10).outcome == ErgodicOutcome::Converged);
}

TEST_CASE("mean convergence implies weak convergence on the same data") {
  std::vector<OperatorSpec> specs = {OperatorSpec::identity(N1), OperatorSpec::diagonal(N1, {{1, 1.0}}, 0.5),
                                     OperatorSpec::backward_shift(N1, WeightRule::power_ratio(0.25, RatioForm::KOverKMinusOne))};
  Rng rng(17);
  for (const auto& s : specs) {
    const auto x = random_unit_vector(N1, rng, 4, 2.0), y = random_unit_vector(N1, rng, 4, 2.0);
    if (mean_ergodic_probe(s, x, 1 << 16).outcome == ErgodicOutcome::Converged)
      CHECK(weak_ergodic_probe(s, x, y, 1 << 16).outcome == ErgodicOutcome::Converged);
  }
}

TEST_CASE("cauchy_outcome") {
  CHECK(cauchy_outcome({{1, 1.0}, {2, 0.5}}, 0.0) == ErgodicOutcome::Inconclusive);
  CHECK(cauchy_outcome({{1, 1.0}, {2, 1e-3}, {4, 1e-7}, {8, 1e-8}}, 0.0) == ErgodicOutcome::Converged);
  CHECK(cauchy_outcome({{1, 1.0}, {2, 0.9}, {4, 1.0}, {8, 0.95}}, 0.0) == ErgodicOutcome::Diverged);
  CHECK(cauchy_outcome({{1, 1.0}, {2, 0.5}, {4, 0.05}, {8, 0.01}}, 0.0) == ErgodicOutcome::Inconclusive);
}
