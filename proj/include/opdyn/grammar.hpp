#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "opdyn/dynamics.hpp"
#include "opdyn/operator.hpp"
#include "opdyn/polynomial.hpp"
#include "opdyn/zoo.hpp"

namespace opdyn {

// Malformed operator or vector text. `position` is a 0-based offset into
// the parsed string.
class GrammarError : public std::invalid_argument {
 public:
  GrammarError(std::size_t position, const std::string& msg)
      : std::invalid_argument("at position " + std::to_string(position) + ": " + msg), position(position) {}
  std::size_t position;
};

struct ParsedOperator {
  std::string text;
  OperatorSpec spec = OperatorSpec::identity(IndexUniverse::nat());
  std::optional<ZooEntry> entry;        // set for zoo ids
  std::optional<Polynomial> poly;       // set for polyshift
  ShiftSide side = ShiftSide::Unilateral;
  std::optional<WeightRule> backward_rule;  // set for backward shifts
  std::optional<double> p;              // norm exponent given inline
};

// Operators:
//   <zoo id> | twoiso | hyper4 | identity[:n=<dim>] | bilateral
//   bshift:alpha=<a>[,p=<p>]     e_k -> (k/(k-1))^a e_{k-1}
//   fshift:alpha=<a>[,p=<p>]     e_k -> ((k+1)/k)^a e_{k+1}
//   polyshift:p=<c0>,<c1>,...[;dir=fwd|bwd][;side=uni|bi]
//   matrix:[[<z>,...],...]   diag:[<z>,...]
//   lblock:theta=<t>   hyper:dim=<d>,ell=<l>[,t1=<a>,t2=<b>]
//   blocktz:<operator>
// Scalars: 1.5, -2, 0.5+2i, 3i, cis(<t>) = e^{it}.
ParsedOperator parse_operator(const std::string& text);

// Vectors over u:
//   [<coef>*]e<k>[@<block>] joined by + or -     e.g. e1+0.5*e3, e-1@1
//   dense:[<z>,...]   random[:<seed>]   adv:<n>
SparseVec parse_vector(const std::string& text, const IndexUniverse& u, std::uint64_t seed, double p);

// Decimal or 0x-prefixed hexadecimal.
std::uint64_t parse_seed(const std::string& text);
// Integer count, accepting forms such as 1e6 when the value is integral.
Index parse_count(const std::string& text);

}  // namespace opdyn
