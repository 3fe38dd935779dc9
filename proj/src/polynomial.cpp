#include "opdyn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"

namespace opdyn {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  for (double v : c_)
    if (!std::isfinite(v)) throw ParameterError("polynomial coefficients must be finite");
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double a) const {
  // Repeated synthetic division (Taylor shift).
  std::vector<double> c = c_;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += a * c[j];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

std::string Polynomial::describe() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ",";
    os << format_double(c_[i]);
  }
  return os.str();
}

double cauchy_root_bound(const Polynomial& p) {
  if (p.is_zero()) throw DomainError("zero polynomial has no root bound");
  const auto& c = p.coeffs();
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i] / c.back()));
  return 1.0 + m;
}

void require_positive_on(const Polynomial& p, std::int64_t lo, std::int64_t hi) {
  if (p.is_zero() || p.leading() <= 0.0)
    throw ConstructionError("polynomial " + p.describe() + " must have positive leading coefficient");
  for (std::int64_t k = lo; k <= hi; ++k)
    if (!(p(static_cast<double>(k)) > 0.0))
      throw ConstructionError("polynomial " + p.describe() + " is not positive at index " +
                              std::to_string(k));
}

}  // namespace opdyn
