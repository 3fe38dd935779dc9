#include "opdyn/probes.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "opdyn/errors.hpp"

namespace opdyn {

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

void ProbeConfig::validate() const {
  if (n_max < 1) throw ParameterError("n_max must be >= 1");
  if (lambda_samples < 4) throw ParameterError("lambda_samples must be >= 4");
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be > 0");
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  if (basis_count < 0 || random_count < 0 || random_support < 1)
    throw ParameterError("probe counts must be nonnegative and support >= 1");
  if (!(divergence_factor > 1.0)) throw ParameterError("divergence factor must exceed 1");
}

std::vector<Key> canonical_keys(const IndexUniverse& u, std::size_t count) {
  std::vector<Key> keys;
  if (u.is_finite()) count = std::min<std::size_t>(count, static_cast<std::size_t>(u.dimension()));
  for (Index i = 0; keys.size() < count; ++i) {
    Index pos;
    if (u.kind == UniverseKind::AllIntegers)
      pos = (i % 2 == 0) ? -(i / 2) : (i + 1) / 2;
    else
      pos = i + 1;
    for (int b = 0; b < u.blocks && keys.size() < count; ++b) keys.push_back({b, pos});
  }
  return keys;
}

SparseVec adversarial_vector(Index n, double p) {
  if (n < 2 || n % 2 != 0) throw ParameterError("adversarial vectors need even n >= 2");
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  const double c = std::pow(static_cast<double>(n), -1.0 / p);
  std::vector<Entry> es;
  es.reserve(static_cast<std::size_t>(n));
  for (Index s = 1; s <= n; ++s) es.push_back({{0, s}, Complex(c, 0.0)});
  return SparseVec::from_sorted(IndexUniverse::nat(), std::move(es));
}

std::vector<Index> adversarial_sizes(Index n_max) {
  std::vector<Index> out;
  for (Index n = 2; n <= n_max; n *= 2) out.push_back(n);
  return out;
}

SparseVec random_unit_vector(const IndexUniverse& u, Rng& rng, int support, double p) {
  const auto keys = canonical_keys(u, static_cast<std::size_t>(support));
  std::vector<Entry> es;
  for (const auto& k : keys) es.push_back({k, rng.complex_normal()});
  SparseVec v = SparseVec::from_entries(u, std::move(es));
  const double nrm = p_norm(v, p);
  if (nrm == 0.0) return v;
  return Complex(1.0 / nrm, 0.0) * v;
}

std::string format_seed(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(seed));
  return buf;
}

std::vector<ProbeVector> probe_vectors(const IndexUniverse& u, const ProbeConfig& cfg) {
  cfg.validate();
  std::vector<ProbeVector> out;
  for (const auto& k : canonical_keys(u, static_cast<std::size_t>(cfg.basis_count))) {
    std::string label = "e" + std::to_string(k.pos);
    if (u.blocks > 1) label += "@" + std::to_string(k.block);
    out.push_back({label, basis_vector(u, k.pos, k.block)});
  }
  Rng rng(cfg.seed);
  for (int i = 0; i < cfg.random_count; ++i)
    out.push_back({"random#" + std::to_string(i) + "(seed=" + format_seed(cfg.seed) +
                       ",support=" + std::to_string(cfg.random_support) + ")",
                   random_unit_vector(u, rng, cfg.random_support, cfg.p)});
  if (cfg.adversarial && u.kind == UniverseKind::NatFromOne && u.blocks == 1)
    for (Index n : adversarial_sizes(cfg.n_max))
      out.push_back({"adversarial(n=" + std::to_string(n) + ")", adversarial_vector(n, cfg.p)});
  return out;
}

}  // namespace opdyn
