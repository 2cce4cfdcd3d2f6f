// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>
#include <vector>

#include "foldip/errors.hpp"
#include "foldip/numeric.hpp"

namespace foldip {

// Separable convex terms.  Every term maps integers to integers and is
// convex on the whole line; validation rejects anything else.

struct LinearTerm {
  Int a = 0;  // a*x
};

struct QuadraticTerm {
  Int a = 0, b = 0, c = 0;  // a*x^2 + b*x + c, a >= 0
};

struct AbsTerm {
  Int weight = 0, center = 0;  // weight * |x - center|, weight >= 0
};

// Piecewise linear: slopes[0] left of breaks[0], slopes[i] between
// breaks[i-1] and breaks[i], slopes.back() right of breaks.back().
// Anchored at f(breaks[0]) = 0 (f(0) = 0 when there are no breaks).
struct PwlTerm {
  std::vector<Int> breaks;
  std::vector<Int> slopes;
};

using ConvexTerm = std::variant<LinearTerm, QuadraticTerm, AbsTerm, PwlTerm>;

struct LinearObjective {
  IntVector c;  // maximize c^T x
};

struct ConvexObjective {
  std::vector<ConvexTerm> terms;  // minimize sum of terms, one per variable
};

using Objective = std::variant<LinearObjective, ConvexObjective>;

// Throws NonConvexTerm / BadObjective on malformed terms.
void validate_term(const ConvexTerm& term);

BigInt eval_term(const ConvexTerm& term, const BigInt& x);

// f(z + lambda*y) - f(z)
BigInt incremental_cost(const ConvexTerm& term, Int z, const BigInt& lambda,
                        const BigInt& y);

// Extremes of a term over the integer interval [lo, hi] (lo <= hi).
BigInt term_min_on(const ConvexTerm& term, const BigInt& lo, const BigInt& hi);
BigInt term_max_on(const ConvexTerm& term, const BigInt& lo, const BigInt& hi);

inline bool is_linear(const Objective& obj) {
  return std::holds_alternative<LinearObjective>(obj);
}

inline Int max_abs_coeff(const LinearObjective& obj) {
  Int m = 0;
  for (Index i = 0; i < obj.c.size(); ++i) {
    Int a = obj.c[i] < 0 ? -obj.c[i] : obj.c[i];
    if (a > m) m = a;
  }
  return m;
}

}  // namespace foldip
