// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>

#include "foldip/augment_dp.hpp"
#include "foldip/graver_bounds.hpp"
#include "foldip/instance.hpp"
#include "foldip/lp.hpp"

namespace foldip {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct SolveStats {
  BigInt iterations = 0;            // accepted steps, main loop
  BigInt phase_one_iterations = 0;  // accepted steps while finding a start
  BigInt dp_calls = 0;
  std::map<unsigned, BigInt> lambda_histogram;  // exponent -> accepted steps
  BigInt iteration_cap = 0;  // theoretical cap of the main loop
  unsigned phi = 0;          // bit length of the largest instance number
  bool used_lp = false;
  bool used_phase_one = false;
  double seconds_total = 0;
  double seconds_lp = 0;
  double seconds_phase_one = 0;
  double seconds_augment = 0;
};

struct SolveOptions {
  int threads = 1;
  std::optional<BigInt> max_iterations;  // safety cap below the theoretical one
  std::optional<int> lambda_max_exp;     // largest step-length exponent to try
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;  // present only for Optimal
  SolveStats stats;
};

// Exact optimum for either objective kind.  Linear objectives are maximized
// and may be Unbounded; convex objectives are minimized and require finite
// bounds.  Infinite bounds on the linear path are reduced to finite ones by
// solving the rational relaxation and clamping around its vertex.
SolveResult solve(const Instance& inst, const SolveOptions& opts = {});

// Entry point that insists on a convex objective.
SolveResult solve_convex(const Instance& inst, const SolveOptions& opts = {});

// Feasible point, or nullopt when none exists.  Works with infinite bounds
// by clamping an always-feasible auxiliary problem first.
std::optional<Solution> phase_one(const Instance& inst,
                                  const SolveOptions& opts = {},
                                  SolveStats* stats = nullptr);

// Shrinks bounds to the proximity window around a fractional vertex:
// [ceil(x*_j) - n*t*L_A, floor(x*_j) + n*t*L_A] intersected with the
// original box.  Some integer optimum always survives the shrink.
Instance clamp_by_proximity(const Instance& inst, const RationalVector& x_star);

// Bit length of the largest magnitude among matrix entries, rhs, objective
// coefficients, and finite bounds.
unsigned compute_phi(const Instance& inst);

}  // namespace foldip
