#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opdyn/operator.hpp"
#include "opdyn/probes.hpp"

namespace opdyn {

// sum_{k=0}^m (-1)^{m-k} C(m,k) ||T^k x||^2 with l2 norms.
double defect(const OperatorSpec& spec, const SparseVec& x, int m);

// m-th forward difference of s at index 0.
double forward_difference(const std::vector<double>& s, int m);

struct IsometryReport {
  int m_tested = 0;
  double max_defect = 0.0;           // largest |defect| over probes
  double max_relative_defect = 0.0;  // |defect| / max_k ||T^k x||^2
  bool holds = false;
  std::optional<int> strict_order;
  std::string witness;               // probe with the largest relative defect
  double witness_defect = 0.0;
  std::vector<std::pair<std::string, std::optional<int>>> degree_profile;
};

IsometryReport is_m_isometry(const OperatorSpec& spec, int m, const ProbeConfig& cfg);
// Report for the smallest m <= m_max that holds; its witness comes from
// the failed (m-1) check. strict_order stays empty when nothing holds.
IsometryReport strict_order_report(const OperatorSpec& spec, int m_max, const ProbeConfig& cfg);
std::optional<int> strict_order(const OperatorSpec& spec, int m_max, const ProbeConfig& cfg);

// Degree of n -> ||T^n x||^2 from forward differences over `window` points,
// doubling the window up to 512 before giving up. Returns -1 for x = 0.
int norm_square_degree(const OperatorSpec& spec, const SparseVec& x, int window = 33);

// Weighted shift with w_n = sqrt(p(n+1)/p(n)). The backward variant is the
// adjoint of the forward one.
OperatorSpec shift_from_polynomial(const Polynomial& p, ShiftDirection dir, IndexUniverse u);

// Leading coefficient of the quadratic n -> ||T^n x||^2.
double covariance_form(const OperatorSpec& spec, const SparseVec& x);

struct CovarianceProbe {
  bool injective_evidence = false;
  bool identically_zero = false;
  std::optional<ProbeVector> kernel_witness;
  std::vector<std::pair<std::string, double>> forms;
};
CovarianceProbe covariance_injectivity_probe(const OperatorSpec& spec, int basis_count);

}  // namespace opdyn
