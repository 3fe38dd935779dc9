#include "opdyn/weights.hpp"

#include <cmath>

#include "opdyn/errors.hpp"
#include "opdyn/format.hpp"

namespace opdyn {

namespace {

constexpr std::int64_t kPositivityScan = 1'000'000;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

WeightRule WeightRule::power_ratio(double alpha, RatioForm form) {
  if (!std::isfinite(alpha)) throw ParameterError("alpha must be finite");
  return WeightRule(PowerRatio{alpha, form});
}

WeightRule WeightRule::poly_ratio(Polynomial p, bool on_integers) {
  if (on_integers) {
    if (p.degree() % 2 != 0)
      throw ConstructionError("polynomial " + p.describe() + " of odd degree cannot stay positive on Z");
    require_positive_on(p, -kPositivityScan, kPositivityScan + 1);
  } else {
    require_positive_on(p, 1, kPositivityScan + 1);
  }
  return WeightRule(PolyRatio{std::move(p), on_integers});
}

WeightRule WeightRule::explicit_weights(std::vector<double> head, double tail, std::int64_t first) {
  for (std::size_t i = 0; i < head.size(); ++i)
    if (!(head[i] > 0.0) || !std::isfinite(head[i]))
      throw ConstructionError("weight at index " + std::to_string(first + static_cast<std::int64_t>(i)) +
                              " must be positive and finite");
  if (!(tail > 0.0) || !std::isfinite(tail))
    throw ConstructionError("tail weight must be positive and finite");
  return WeightRule(ExplicitWeights{std::move(head), tail, first});
}

WeightRule WeightRule::shifted(std::int64_t delta) const {
  WeightRule r = *this;
  r.offset_ += delta;
  return r;
}

bool WeightRule::valid_at(std::int64_t k) const {
  const std::int64_t j = k + offset_;
  return std::visit(overloaded{
                        [&](const PowerRatio& r) {
                          return r.form == RatioForm::KOverKMinusOne ? j >= 2 : j >= 1;
                        },
                        [&](const PolyRatio& r) { return r.on_integers || j >= 1; },
                        [](const ExplicitWeights&) { return true; },
                    },
                    base_);
}

bool WeightRule::valid_everywhere() const {
  if (const auto* r = std::get_if<PolyRatio>(&base_)) return r->on_integers;
  return std::holds_alternative<ExplicitWeights>(base_);
}

std::int64_t WeightRule::first_valid_index() const {
  std::int64_t k = 1;
  if (const auto* r = std::get_if<PowerRatio>(&base_))
    k = std::max<std::int64_t>(1, (r->form == RatioForm::KOverKMinusOne ? 2 : 1) - offset_);
  else if (const auto* q = std::get_if<PolyRatio>(&base_); q && !q->on_integers)
    k = std::max<std::int64_t>(1, 1 - offset_);
  return k;
}

double WeightRule::log_at(std::int64_t k) const {
  if (!valid_at(k)) throw DomainError("weight index " + std::to_string(k) + " invalid for " + describe());
  const std::int64_t j = k + offset_;
  return std::visit(
      overloaded{
          [&](const PowerRatio& r) {
            const double d = r.form == RatioForm::KOverKMinusOne ? static_cast<double>(j - 1)
                                                                  : static_cast<double>(j);
            return r.alpha * std::log1p(1.0 / d);
          },
          [&](const PolyRatio& r) {
            const double a = r.p(static_cast<double>(j + 1));
            const double b = r.p(static_cast<double>(j));
            if (!(a > 0.0) || !(b > 0.0))
              throw ConstructionError("polynomial " + r.p.describe() + " is not positive at index " +
                                      std::to_string(a > 0.0 ? j : j + 1));
            return 0.5 * (std::log(a) - std::log(b));
          },
          [&](const ExplicitWeights& r) {
            const std::int64_t i = j - r.first;
            if (i >= 0 && i < static_cast<std::int64_t>(r.head.size())) return std::log(r.head[i]);
            return std::log(r.tail);
          },
      },
      base_);
}

double WeightRule::at(std::int64_t k) const {
  if (!valid_at(k)) throw DomainError("weight index " + std::to_string(k) + " invalid for " + describe());
  const std::int64_t j = k + offset_;
  return std::visit(
      overloaded{
          [&](const PowerRatio& r) {
            const double num = r.form == RatioForm::KOverKMinusOne ? static_cast<double>(j)
                                                                    : static_cast<double>(j + 1);
            const double den = r.form == RatioForm::KOverKMinusOne ? static_cast<double>(j - 1)
                                                                    : static_cast<double>(j);
            return std::pow(num / den, r.alpha);
          },
          [&](const PolyRatio& r) {
            const double a = r.p(static_cast<double>(j + 1));
            const double b = r.p(static_cast<double>(j));
            if (!(a > 0.0) || !(b > 0.0))
              throw ConstructionError("polynomial " + r.p.describe() + " is not positive at index " +
                                      std::to_string(a > 0.0 ? j : j + 1));
            return std::sqrt(a / b);
          },
          [&](const ExplicitWeights& r) {
            const std::int64_t i = j - r.first;
            if (i >= 0 && i < static_cast<std::int64_t>(r.head.size())) return r.head[i];
            return r.tail;
          },
      },
      base_);
}

std::string WeightRule::describe() const {
  std::string s = std::visit(
      overloaded{
          [](const PowerRatio& r) {
            return "power_ratio(alpha=" + format_double(r.alpha) +
                   (r.form == RatioForm::KOverKMinusOne ? ",k/(k-1))" : ",(k+1)/k)");
          },
          [](const PolyRatio& r) { return "poly_ratio(p=" + r.p.describe() + ")"; },
          [](const ExplicitWeights& r) {
            std::string h;
            for (std::size_t i = 0; i < r.head.size(); ++i) h += (i ? "," : "") + format_double(r.head[i]);
            return "explicit(head=[" + h + "],tail=" + format_double(r.tail) +
                   ",first=" + std::to_string(r.first) + ")";
          },
      },
      base_);
  if (offset_ != 0) s += "<offset " + std::to_string(offset_) + ">";
  return s;
}

double weight_at(const WeightRule& rule, std::int64_t k) { return rule.at(k); }

}  // namespace opdyn
