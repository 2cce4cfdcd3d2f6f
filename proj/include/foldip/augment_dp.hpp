// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "foldip/instance.hpp"
#include "foldip/numeric.hpp"

namespace foldip {

// Best augmenting direction at a fixed step length.  The search runs over a
// layered graph with one layer per column; a layer's states are the partial
// sums of column contributions in Z^(r+s), kept within the pruning radius
// delta * norm_cap.  Block boundaries only admit states whose diagonal part
// is zero, the last layer only the all-zero state, so accepted paths are
// kernel vectors of the full matrix with kernel bricks.

struct MultWindow {
  BigInt lo, hi;  // multiplicity range for one variable; always contains 0
};

// Per-variable windows so that z + lambda*y stays inside the bounds:
// [max(ceil((l_j - z_j)/lambda), -norm_cap),
//  min(floor((u_j - z_j)/lambda), norm_cap)], infinite sides dropping out.
std::vector<MultWindow> clamp_bounds(const Instance& inst, const IntVector& z,
                                     const BigInt& lambda,
                                     const BigInt& norm_cap);

struct AugmentingStep {
  BigVector y;
  BigInt lambda;
  BigInt gain;  // objective improvement of the move lambda * y; positive
};

// None when no direction improves.  The winner may have 1-norm above
// norm_cap, but its weight dominates every kernel vector within norm_cap,
// which is all the augmentation argument needs.
std::optional<AugmentingStep> solve_augmentation(const Instance& inst,
                                                 const IntVector& z,
                                                 const BigInt& lambda,
                                                 const BigInt& norm_cap);

}  // namespace foldip
