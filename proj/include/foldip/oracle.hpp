// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "foldip/instance.hpp"
#include "foldip/numeric.hpp"
#include "foldip/objective.hpp"

namespace foldip {

// Independent reference implementations.  Everything here enumerates; the
// point is trustworthiness on small inputs, not speed.

struct OracleResult {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  IntVector x;
  BigInt value;
};

inline constexpr Int kDefaultBoxCap = 10'000'000;
inline constexpr std::uint64_t kDefaultNodeBudget = 200'000'000;

// Scans every integer point of the bound box (all bounds must be finite,
// volume at most box_cap; BoxTooLarge otherwise) and returns the exact
// optimum: max c^T x for a linear objective, min sum f_i for a convex one.
OracleResult brute_force_solve_dense(const IntMatrix& matrix,
                                     const IntVector& rhs, const BoundVec& lower,
                                     const BoundVec& upper, const Objective& obj,
                                     const BigInt& box_cap = kDefaultBoxCap);

OracleResult brute_force_solve(const Instance& inst,
                               const BigInt& box_cap = kDefaultBoxCap);

BigInt l1_norm(const IntVector& v);

// v is sign-compatible with u and bounded by it entrywise.
bool conforms_to(const IntVector& v, const IntVector& u);

// All nonzero kernel elements of the matrix with 1-norm <= cap, in
// lexicographic order.  The DFS walks coordinates left to right with a
// running 1-norm budget and per-row reachability pruning; CapTooLarge when
// node_budget is exhausted.
std::vector<IntVector> enumerate_kernel(
    const IntMatrix& matrix, const BigInt& cap,
    std::uint64_t node_budget = kDefaultNodeBudget);

// Kernel elements that cannot be written as a sum of two nonzero
// sign-compatible kernel elements.  Symmetric under negation.
std::vector<IntVector> enumerate_graver(
    const IntMatrix& matrix, const BigInt& cap,
    std::uint64_t node_budget = kDefaultNodeBudget);

struct BoundCheck {
  BigInt max_norm;
  BigInt bound;
};

// Asserts every element's 1-norm is within `bound`; throws BoundViolated
// otherwise.  A violation is a bug, never an expected outcome.
BoundCheck check_bound(const std::vector<IntVector>& graver, const BigInt& bound);

// Greedily writes x as a nonnegative integer combination of conforming
// Graver elements; true on success.  Used to sanity-check enumerated bases.
bool decomposes_over(const IntVector& x, const std::vector<IntVector>& graver);

}  // namespace foldip
