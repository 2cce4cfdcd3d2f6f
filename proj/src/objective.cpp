// SPDX-License-Identifier: Apache-2.0
#include "foldip/objective.hpp"

namespace foldip {

namespace {

void check_magnitude(Int v) {
  require(v >= -kMaxEntryMagnitude && v <= kMaxEntryMagnitude,
          ErrorCode::EntryTooLarge, "objective coefficient out of range");
}

BigInt pwl_eval(const PwlTerm& t, const BigInt& x) {
  if (t.breaks.empty()) return BigInt(t.slopes[0]) * x;
  const std::size_t k = t.breaks.size();
  BigInt anchor = t.breaks[0];
  if (x < anchor) return BigInt(t.slopes[0]) * (x - anchor);
  BigInt acc = 0;
  BigInt pos = anchor;
  for (std::size_t j = 1; j < k; ++j) {
    // segment j runs from breaks[j-1] to breaks[j] with slope slopes[j]
    BigInt end = t.breaks[j];
    if (x <= end) return acc + BigInt(t.slopes[j]) * (x - pos);
    acc += BigInt(t.slopes[j]) * (end - pos);
    pos = end;
  }
  return acc + BigInt(t.slopes[k]) * (x - pos);
}

}  // namespace

void validate_term(const ConvexTerm& term) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LinearTerm>) {
          check_magnitude(t.a);
        } else if constexpr (std::is_same_v<T, QuadraticTerm>) {
          check_magnitude(t.a);
          check_magnitude(t.b);
          check_magnitude(t.c);
          require(t.a >= 0, ErrorCode::NonConvexTerm,
                  "quadratic term needs a >= 0");
        } else if constexpr (std::is_same_v<T, AbsTerm>) {
          check_magnitude(t.weight);
          check_magnitude(t.center);
          require(t.weight >= 0, ErrorCode::NonConvexTerm,
                  "absolute-value term needs weight >= 0");
        } else {
          require(t.slopes.size() == t.breaks.size() + 1,
                  ErrorCode::BadObjective,
                  "piecewise term needs one more slope than breaks");
          for (Int v : t.breaks) check_magnitude(v);
          for (Int v : t.slopes) check_magnitude(v);
          for (std::size_t i = 1; i < t.breaks.size(); ++i)
            require(t.breaks[i - 1] < t.breaks[i], ErrorCode::BadObjective,
                    "piecewise breaks must be strictly increasing");
          for (std::size_t i = 1; i < t.slopes.size(); ++i)
            require(t.slopes[i - 1] <= t.slopes[i], ErrorCode::NonConvexTerm,
                    "piecewise slopes must be nondecreasing");
        }
      },
      term);
}

BigInt eval_term(const ConvexTerm& term, const BigInt& x) {
  return std::visit(
      [&](const auto& t) -> BigInt {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LinearTerm>) {
          return BigInt(t.a) * x;
        } else if constexpr (std::is_same_v<T, QuadraticTerm>) {
          return BigInt(t.a) * x * x + BigInt(t.b) * x + t.c;
        } else if constexpr (std::is_same_v<T, AbsTerm>) {
          return BigInt(t.weight) * abs(x - t.center);
        } else {
          return pwl_eval(t, x);
        }
      },
      term);
}

BigInt incremental_cost(const ConvexTerm& term, Int z, const BigInt& lambda,
                        const BigInt& y) {
  return eval_term(term, BigInt(z) + lambda * y) - eval_term(term, BigInt(z));
}

// Convexity makes the forward difference f(x+1) - f(x) nondecreasing, so the
// integer minimizer is found by binary search on its sign.
BigInt term_min_on(const ConvexTerm& term, const BigInt& lo, const BigInt& hi) {
  require(lo <= hi, ErrorCode::InternalError, "empty interval");
  BigInt a = lo, b = hi;
  while (a < b) {
    BigInt mid = a + (b - a) / 2;
    if (eval_term(term, mid + 1) >= eval_term(term, mid))
      b = mid;
    else
      a = mid + 1;
  }
  return eval_term(term, a);
}

BigInt term_max_on(const ConvexTerm& term, const BigInt& lo, const BigInt& hi) {
  require(lo <= hi, ErrorCode::InternalError, "empty interval");
  BigInt at_lo = eval_term(term, lo);
  BigInt at_hi = eval_term(term, hi);
  return at_lo > at_hi ? at_lo : at_hi;
}

}  // namespace foldip
