// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "foldip/instance.hpp"
#include "foldip/treefold.hpp"

namespace foldip {

// Seeded random instances; the same seed always yields the same instance on
// every platform.

struct GenSpec {
  Index n = 4, r = 1, s = 1, t = 2;
  Int delta = 2;        // matrix entries drawn from [-delta, delta]
  Int box = 5;          // bound magnitudes drawn from [-box, box]
  Int cost_max = 5;
  double inf_frac = 0;  // chance that a bound is dropped to +-infinity
  bool feasible = true; // right side produced from a sampled box point
  bool convex = false;  // separable convex objective instead of linear
};

Instance generate_instance(const GenSpec& spec, std::uint64_t seed);

struct TreeGenSpec {
  Index mids = 2;        // children of the root; 0 gives a single-node tree
  Index leaves = 2;      // children per middle node
  std::vector<Index> mid_leaves;  // per-middle leaf counts; overrides the two above
  Index cols_per_leaf = 2;
  Index rows_root = 1, rows_mid = 1, rows_leaf = 1;
  Int delta = 1;
  Int box = 3;
  Int cost_max = 5;
  bool feasible = true;
};

TreeInstance generate_tree(const TreeGenSpec& spec, std::uint64_t seed);

}  // namespace foldip
