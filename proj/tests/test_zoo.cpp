#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "opdyn/errors.hpp"
#include "opdyn/isometry.hpp"
#include "opdyn/powers.hpp"
#include "opdyn/zoo.hpp"

using namespace opdyn;

namespace {
const IndexUniverse N1 = IndexUniverse::nat();
}

TEST_CASE("catalogue ids are unique and rows name known probes") {
  const auto entries = zoo_entries();
  CHECK(entries.size() >= 9);
  std::set<std::string> ids;
  const std::set<std::string> probes = {"pb", "cb", "acb", "uk", "kreiss", "sk", "me", "we", "order", "mixing", "hc"};
  for (const auto& e : entries) {
    CHECK(ids.insert(e.id).second);
    CHECK_FALSE(e.expected.empty());
    for (const auto& row : e.expected) CHECK(probes.count(row.probe) == 1);
    REQUIRE(zoo_lookup(e.id).has_value());
    CHECK(zoo_lookup(e.id)->id == e.id);
  }
  CHECK_FALSE(zoo_lookup("no-such-entry").has_value());
}

TEST_CASE("every expected row holds at the default configuration") {
  for (const auto& e : zoo_entries()) {
    for (const auto& r : check_expectations(e, e.config)) {
      INFO(e.id << " " << r.row.probe << " expected " << r.row.expected << " got " << r.actual);
      CHECK(r.match);
    }
  }
}

TEST_CASE("assani entry") {
  const auto a = assani();
  const auto m2 = cesaro_apply(a.spec, basis_vector(a.spec.universe(), 2), 2);
  const auto m1 = cesaro_apply(a.spec, basis_vector(a.spec.universe(), 1), 2);
  // M_2 = (1/3) [[1, -2], [0, 1]]
  CHECK(std::abs(m1.coeff(1) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(m1.coeff(2)) < 1e-15);
  CHECK(std::abs(m2.coeff(1) + 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(m2.coeff(2) - 1.0 / 3.0) < 1e-15);
  for (Index n = 0; n <= 64; ++n) {
    const double s = n % 2 == 0 ? 1.0 : -1.0;
    const auto c1 = power_apply(a.spec, basis_vector(a.spec.universe(), 1), n);
    const auto c2 = power_apply(a.spec, basis_vector(a.spec.universe(), 2), n);
    CHECK(c1.coeff(1) == Complex(s, 0.0));
    CHECK(c2.coeff(1) == Complex(-s * 2.0 * double(n), 0.0));
    CHECK(c2.coeff(2) == Complex(s, 0.0));
  }
}

TEST_CASE("lambda block") {
  CHECK_THROWS_AS(lambda_block(1.0), ParameterError);
  CHECK_THROWS_AS(lambda_block(2.0), ParameterError);
  const auto m = to_dense(lambda_block(-1.0).spec);
  CHECK(m == DenseMatrix::from_rows({{-1.0, -2.0}, {0.0, -1.0}}));
  const Complex l = std::polar(1.0, 1.0);
  const auto s = lambda_block(l).spec;
  const auto orb = orbit_norms(s, basis_vector(s.universe(), 2), 2.0, 20);
  for (const auto& [n, v] : orb.entries)
    CHECK(v * v == doctest::Approx(double(n * n) * std::norm(l - 1.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("shift entries") {
  CHECK_THROWS_AS(acb_backward_shift(2.0, 0.5), ParameterError);
  CHECK_THROWS_AS(acb_backward_shift(2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(forward_kreiss_shift(0.5), ParameterError);
  CHECK_THROWS_AS(non_cesaro_backward_shift(0.5), ParameterError);
  CHECK(power_norm_exact(acb_backward_shift(2.0, 0.25).spec, 3, 2.0) == doctest::Approx(std::sqrt(2.0)));
  const auto f = forward_kreiss_shift(0.4).spec;
  CHECK(p_norm(power_apply(f, basis_vector(N1, 1), 10), 2.0) == doctest::Approx(std::pow(11.0, 0.4)).epsilon(1e-13));
}

TEST_CASE("the Kreiss shift adjoint acts as the ACB backward shift") {
  for (double a : {0.1, 0.25, 0.4}) {
    const auto fa = adjoint(forward_kreiss_shift(a).spec);
    const auto b = acb_backward_shift(2.0, a).spec;
    for (Index k = 1; k <= 200; ++k) {
      const auto e = basis_vector(N1, k);
      CHECK(max_abs_diff(apply(fa, e), apply(b, e)) <= 1e-14 * std::max(1.0, p_norm(apply(b, e), 2.0)));
    }
  }
}

TEST_CASE("two-isometry embedding") {
  const auto t = two_isometry_embedding().spec;
  const auto e1 = basis_vector(N1, 1);
  CHECK(std::abs(defect(t, e1, 2)) < 1e-14 * 3.0);
  CHECK(defect(t, e1, 1) == doctest::Approx(1.0));
  const auto orb = orbit_norms(t, e1, 2.0, 50);
  for (const auto& [n, v] : orb.entries) CHECK(v * v == doctest::Approx(double(n + 1)).epsilon(1e-13));
}

TEST_CASE("block entries") {
  const auto id = block_tz(OperatorSpec::identity(N1), "identity");
  CHECK(id.id == "blocktz-identity");
  Rng rng(2);
  const auto x = random_unit_vector(id.spec.universe(), rng, 8, 2.0);
  CHECK(power_apply(id.spec, x, 9) == x);
}

TEST_CASE("diagonal plus nilpotent entry") {
  CHECK_THROWS_AS(diag_nilpotent_3isometry(4, 1), ParameterError);
  CHECK_THROWS_AS(diag_nilpotent_3isometry(4, 3), ParameterError);
  CHECK_THROWS_AS(diag_nilpotent_3isometry(3, 2), ParameterError);
  const auto e = diag_nilpotent_3isometry(6, 3);
  ProbeConfig cfg;
  CHECK(strict_order(e.spec, 7, cfg) == 5);
  ProbeConfig many;
  many.random_count = 100;
  many.basis_count = 4;
  CHECK(is_m_isometry(diag_nilpotent_3isometry().spec, 3, many).max_relative_defect < 1e-9);
}

TEST_CASE("adversarial vector") {
  const auto x = adversarial_vector(4, 2.0);
  for (Index k = 1; k <= 4; ++k) CHECK(x.coeff(k) == Complex(0.5, 0.0));
  const auto y = adversarial_vector(2, 1.0);
  CHECK(y.coeff(1) == Complex(0.5, 0.0));
  CHECK(y.coeff(2) == Complex(0.5, 0.0));
  CHECK(p_norm(x, 2.0) == 1.0);
  CHECK(p_norm(y, 1.0) == 1.0);
  CHECK_THROWS_AS(adversarial_vector(5, 2.0), ParameterError);
}

TEST_CASE("balanced coverage vector is a reproducible unit vector") {
  const Complex l1 = std::polar(1.0, 1.0), l2 = std::polar(1.0, std::sqrt(2.0));
  const auto a = balanced_hc_vector(l1, l2, 5);
  CHECK(a == balanced_hc_vector(l1, l2, 5));
  CHECK(p_norm(a, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
}
