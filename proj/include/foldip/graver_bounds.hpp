// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "foldip/instance.hpp"
#include "foldip/numeric.hpp"

namespace foldip {

// Norm bounds for Graver bases of block matrices.  All values are exact;
// they grow far beyond 64 bits for moderate parameters.

// Elements of the Graver basis of a single s x t block have 1-norm at most
// (2*s*delta + 1)^s, independent of t.
BigInt compute_LB(Index s, Int delta);

// Elements of the Graver basis of the full block matrix have 1-norm at most
// L_B * (2*r*delta*L_B + 1)^r.
BigInt compute_LA(Index r, Index s, Int delta);

// Tree-structured analogue: given the largest row count per tree layer
// (deepest layer first) the bound is (3*S*delta)^(S-1) with
// S = prod(layer_max[i] + 1), clamped to at least 1.
BigInt compute_Ltau(const std::vector<Index>& layer_maxima, Int delta);

// Largest box width max_i (u_i - l_i); nullopt when some bound is infinite.
std::optional<BigInt> compute_gamma(const BoundVec& lower, const BoundVec& upper);

// Augmenting steps never need more than min(L_A, sum of box widths) in
// 1-norm; the box sum often cuts the DP state space dramatically.
// Requires finite bounds.
BigInt effective_norm_bound(const Instance& inst, const BigInt& L_A);

struct BoundsReport {
  Index n = 0, r = 0, s = 0, t = 0;
  Int delta = 0;
  BigInt L_B;
  BigInt L_A;
  std::optional<BigInt> gamma;  // nullopt = unbounded box
  BigInt effective;             // equals L_A when the box is unbounded
};

BoundsReport compute_bounds_report(const Instance& inst);

}  // namespace foldip
