#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opdyn/operator.hpp"
#include "opdyn/powers.hpp"
#include "opdyn/probes.hpp"

namespace opdyn {

enum class BoundClass {
  PowerBounded,
  CesaroBounded,
  AbsolutelyCesaroBounded,
  UniformlyKreiss,
  StronglyKreiss,
  Kreiss,
  Growth,
};
enum class Outcome { BoundedUpTo, Violated, Inconclusive };
enum class Certainty { Exact, Probe };

std::string to_string(BoundClass c);
std::string to_string(Outcome o);
std::string to_string(Certainty c);

struct Witness {
  std::string vector;  // probe label, or "operator" for exact operator norms
  double at = 0.0;     // n, delta or radius
  double value = 0.0;
  std::optional<Complex> lambda;
};

struct ClassVerdict {
  BoundClass class_name = BoundClass::Growth;
  Outcome outcome = Outcome::Inconclusive;
  Index horizon = 0;
  double best_constant = 0.0;
  std::optional<Witness> witness;
  Certainty certainty = Certainty::Probe;
  std::vector<std::pair<std::string, std::string>> parameters;
  // Running maximum of the tested quantity at the checkpoints (n, delta or
  // radius, value).
  std::vector<std::pair<double, double>> curve;
};

// Declares a violation when the final running maximum is at least `factor`
// times the first positive checkpoint and still rose at the last step.
Outcome divergence_outcome(const std::vector<std::pair<double, double>>& curve, double factor);

// n = 1..64, then powers of two, then n_max.
std::vector<Index> power_checkpoints(Index n_max);
// 1, 2, 4, ... and n_max.
std::vector<Index> dyadic_checkpoints(Index n_max);
// e^{2 pi i k / K} for k < K, plus -1 when K is odd.
std::vector<Complex> lambda_grid(int samples);

ClassVerdict acb_constant(const OperatorSpec& spec, const ProbeConfig& cfg);
ClassVerdict power_bounded_probe(const OperatorSpec& spec, const ProbeConfig& cfg);
ClassVerdict cesaro_bounded_probe(const OperatorSpec& spec, const ProbeConfig& cfg);
ClassVerdict uniform_kreiss_probe(const OperatorSpec& spec, const ProbeConfig& cfg);

// (|lambda| - 1) * ||(lambda I - A)^{-1}||; throws SingularMatrixError.
double resolvent_scaled_norm(const DenseMatrix& a, Complex lambda);
std::vector<double> default_deltas();
ClassVerdict kreiss_resolvent_constant(const OperatorSpec& spec, std::vector<double> deltas, int arg_samples);

std::vector<double> default_radii();
ClassVerdict strong_kreiss_exp_probe(const OperatorSpec& spec, std::vector<double> radii, int arg_samples);

double growth_exponent(const NormSeq& seq);

enum class Trend { DecreasingToZero, Bounded, Growing };
std::string to_string(Trend t);
Trend ratio_trend(const NormSeq& seq, double beta);

}  // namespace opdyn
