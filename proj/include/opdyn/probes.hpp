#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "opdyn/core.hpp"

namespace opdyn {

// Deterministic generator: mt19937_64 with hand-written uniform and normal
// transforms so that streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  double uniform();  // [0, 1)
  double normal();
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct ProbeConfig {
  Index n_max = 4096;
  int lambda_samples = 64;
  int basis_count = 8;
  int random_count = 8;
  int random_support = 16;
  std::uint64_t seed = 0xCE5A70;
  bool adversarial = true;
  double p = 2.0;
  double tolerance = 1e-9;
  double divergence_factor = 2.0;

  void validate() const;
};

struct ProbeVector {
  std::string label;
  SparseVec vec;
};

// Basis positions in canonical order: 1,2,3,... on N; 0,1,-1,2,-2,... on Z.
// Blocks are interleaved position by position.
std::vector<Key> canonical_keys(const IndexUniverse& u, std::size_t count);

// n^{-1/p}(e_1 + ... + e_n) for even n >= 2.
SparseVec adversarial_vector(Index n, double p);

// Even n = 2, 4, 8, ... up to n_max.
std::vector<Index> adversarial_sizes(Index n_max);

// Unit basis vectors, seeded random unit vectors, and (on single-block N
// when enabled) the adversarial family.
std::vector<ProbeVector> probe_vectors(const IndexUniverse& u, const ProbeConfig& cfg);

// Seeded random unit vector supported on the first `support` canonical keys.
SparseVec random_unit_vector(const IndexUniverse& u, Rng& rng, int support, double p);

std::string format_seed(std::uint64_t seed);

}  // namespace opdyn
