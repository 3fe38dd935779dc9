#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/operator.hpp"
#include "opdyn/probes.hpp"

namespace opdyn {

// Probe names: pb, cb, acb, uk, kreiss, sk (classify), me, we (ergodic),
// order (strict isometric order), mixing, hc (coverage growth).
struct ExpectedRow {
  std::string probe;
  std::string expected;
  std::string anchor;  // short statement of the claim being checked
};

struct ZooEntry {
  std::string id;
  std::string description;
  OperatorSpec spec = OperatorSpec::identity(IndexUniverse::nat());
  std::vector<ExpectedRow> expected;
  std::string notes;
  ProbeConfig config;                   // desk-scale defaults for this entry
  std::optional<WeightRule> shift_rule;  // backward shift weights, when mixing applies
  SparseVec ergodic_x;
  SparseVec ergodic_y;
  SparseVec hc_vector;
};

ZooEntry assani();
ZooEntry lambda_block(Complex lambda);
ZooEntry acb_backward_shift(double p, double alpha);
ZooEntry forward_kreiss_shift(double alpha);
ZooEntry non_cesaro_backward_shift(double p);
ZooEntry two_isometry_embedding();
// `tag` names the inner operator in the entry id (blocktz-<tag>).
ZooEntry block_tz(const OperatorSpec& inner, const std::string& tag);
ZooEntry diag_nilpotent_3isometry(int dim = 4, int ell = 2, Complex l1 = std::polar(1.0, 1.0),
                                  Complex l2 = std::polar(1.0, std::sqrt(2.0)));

// Jordan block I + Q of size n (n >= 1).
OperatorSpec jordan_identity_plus_nilpotent(int n);

// Unit vector for the 4x4 coverage probe: seeded complex normal entries with
// the second pair rescaled so both Jordan pairs feed the orbit equally.
SparseVec balanced_hc_vector(Complex l1, Complex l2, std::uint64_t seed);

// The default catalogue in stable order.
std::vector<ZooEntry> zoo_entries();
std::optional<ZooEntry> zoo_lookup(const std::string& id);

struct RowResult {
  ExpectedRow row;
  std::string actual;
  bool match = false;
};

// Runs a single named probe on the entry and returns the verdict text.
std::string run_named_probe(const ZooEntry& e, const std::string& probe, const ProbeConfig& cfg);
std::vector<RowResult> check_expectations(const ZooEntry& e, const ProbeConfig& cfg);

// Horizons used by the named ergodic and coverage probes.
inline constexpr Index kErgodicHorizon = Index{1} << 20;
inline constexpr Index kCoverageHorizon = 1000000;

}  // namespace opdyn
