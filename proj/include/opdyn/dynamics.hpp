#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opdyn/operator.hpp"
#include "opdyn/polynomial.hpp"
#include "opdyn/weights.hpp"

namespace opdyn {

struct MixingReport {
  bool mixing_evidence = false;
  // (n, (prod_{k=k0}^{n} w_k)^{-1}) at dyadic n, k0 the first valid index.
  std::vector<std::pair<Index, double>> inverse_products;
};

MixingReport mixing_criterion_backward_shift(const WeightRule& rule, Index N = Index{1} << 40);
// (prod_{k=k0}^{n} w_k)^{-1} in closed form where one exists.
double inverse_weight_product(const WeightRule& rule, Index n);

enum class ShiftSide { Unilateral, Bilateral };
enum class ChaosClass { Chaotic, MixingOnly, Neither };
std::string to_string(ChaosClass c);

struct Summability {
  Index horizon = 0;
  double partial_sum = 0.0;  // sum_{n=1}^{horizon} p(1)/p(n+1)
  double tail_bound = 0.0;   // bound on the rest; infinity when divergent
  bool converges = false;
};
Summability summability_witness(const Polynomial& p, Index horizon = 10000);

struct ChaosReport {
  ChaosClass verdict = ChaosClass::Neither;
  int degree = 0;
  int strict_order = 1;
  std::optional<Summability> summability;  // unilateral only
};
ChaosReport chaos_criterion_shift_adjoint(const Polynomial& p, ShiftSide side);

struct CoverageReport {
  double R = 40.0;
  double cell = 1.0;
  Index cells_per_axis = 0;
  std::vector<std::pair<Index, Index>> hits;  // sorted cell coordinates
  double coverage_fraction = 0.0;
  Index N_used = 0;
  double orbit_magnitude_max = 0.0;
  // (n, coverage fraction) at n = 10^k and N.
  std::vector<std::pair<Index, double>> curve;
};

// Bins <T^n x, y> for n = 0..N into a grid over [-R, R]^2.
CoverageReport hypercyclicity_probe(const OperatorSpec& spec, const SparseVec& x, const SparseVec& y, Index N,
                                    double R = 40.0, double cell = 1.0);
// Grid cells of the probe grid that meet the circle |z| = radius.
Index circle_cell_count(double R, double cell, double radius);

enum class ErgodicMode { Mean, Weak };
enum class ErgodicOutcome { Converged, Diverged, Inconclusive };
std::string to_string(ErgodicMode m);
std::string to_string(ErgodicOutcome o);

struct ErgodicVerdict {
  ErgodicMode mode = ErgodicMode::Mean;
  ErgodicOutcome outcome = ErgodicOutcome::Inconclusive;
  Index horizon = 0;
  // Mean mode: p-norm of the last mean. Weak mode: the last mean itself.
  Complex limit{};
  // max n * |v_n - limit| (weak) or max n * gap_n (mean).
  double rate = 0.0;
  double witness_gap = 0.0;
  // (n, max(|M_2n - M_n|, |M_{2n-1} - M_n|)) over dyadic n with 2n <= N.
  std::vector<std::pair<Index, double>> gaps;
};

// Cauchy test; gaps at odd steps are included because orbits of period two
// look convergent along even n alone.
ErgodicOutcome cauchy_outcome(const std::vector<std::pair<Index, double>>& gaps, double limit_size);

ErgodicVerdict mean_ergodic_probe(const OperatorSpec& spec, const SparseVec& x, Index N, double p = 2.0);
ErgodicVerdict weak_ergodic_probe(const OperatorSpec& spec, const SparseVec& x, const SparseVec& y, Index N);

}  // namespace opdyn
