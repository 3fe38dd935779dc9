#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "opdyn/polynomial.hpp"

namespace opdyn {

enum class RatioForm {
  KOverKMinusOne,  // (k/(k-1))^alpha, k >= 2
  KPlusOneOverK,   // ((k+1)/k)^alpha, k >= 1
};

struct PowerRatio {
  double alpha;
  RatioForm form;
};

// weight(k)^2 = p(k+1) / p(k)
struct PolyRatio {
  Polynomial p;
  bool on_integers = false;  // positivity checked on Z instead of N
};

// weight(k) = head[k - first] inside the list, tail elsewhere.
struct ExplicitWeights {
  std::vector<double> head;
  double tail = 1.0;
  std::int64_t first = 1;
};

// Positive weight sequence k -> w_k. The offset re-indexes the base rule:
// weight_at(k) = base(k + offset). Adjoints of shifts use offsets of +-1.
class WeightRule {
 public:
  using Base = std::variant<PowerRatio, PolyRatio, ExplicitWeights>;

  static WeightRule power_ratio(double alpha, RatioForm form);
  static WeightRule poly_ratio(Polynomial p, bool on_integers = false);
  static WeightRule explicit_weights(std::vector<double> head, double tail, std::int64_t first = 1);
  static WeightRule constant(double w = 1.0) { return explicit_weights({}, w); }

  const Base& base() const { return base_; }
  std::int64_t offset() const { return offset_; }
  WeightRule shifted(std::int64_t delta) const;

  bool valid_at(std::int64_t k) const;
  bool valid_everywhere() const;
  // Smallest k >= 1 at which the rule is valid.
  std::int64_t first_valid_index() const;
  double at(std::int64_t k) const;
  double log_at(std::int64_t k) const;

  std::string describe() const;

 private:
  explicit WeightRule(Base b) : base_(std::move(b)) {}
  Base base_;
  std::int64_t offset_ = 0;
};

double weight_at(const WeightRule& rule, std::int64_t k);

}  // namespace opdyn
