// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "foldip/instance.hpp"
#include "foldip/numeric.hpp"

namespace foldip {

// Exact rational linear programming: maximize c^T x subject to M x = b and
// box bounds, any of which may be infinite.  Returns a basic optimal
// solution (a vertex as far as the box polytope has one), which the integer
// solver's proximity argument requires.

struct LPResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  RationalVector x;
  Rational value;
  std::vector<Index> basis;  // column indices; >= cols(M) marks artificials
};

LPResult solve_lp_dense(const IntMatrix& matrix, const IntVector& rhs,
                        const BoundVec& lower, const BoundVec& upper,
                        const IntVector& costs);

// Uses the assembled block matrix; the objective must be linear.
LPResult solve_lp(const Instance& inst);

}  // namespace foldip
