#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opdyn {

// Real polynomial, coefficients lowest degree first, trailing zeros trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }
  double operator()(double x) const;

  Polynomial derivative() const;
  // q(x) = p(x + a)
  Polynomial shifted(double a) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string describe() const;

 private:
  std::vector<double> c_;
};

// Every root z satisfies |z| < bound. Throws for the zero polynomial.
double cauchy_root_bound(const Polynomial& p);

// Throws ConstructionError naming the first index in [lo, hi] where p <= 0,
// or when the leading coefficient is nonpositive.
void require_positive_on(const Polynomial& p, std::int64_t lo, std::int64_t hi);

}  // namespace opdyn
