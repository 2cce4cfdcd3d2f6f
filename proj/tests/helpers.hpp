// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "foldip/instance.hpp"
#include "foldip/treefold.hpp"

namespace foldip::testing {

inline IntVector ivec(std::initializer_list<Int> vals) {
  IntVector v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (Int x : vals) v[i++] = x;
  return v;
}

inline IntMatrix imat(std::initializer_list<std::initializer_list<Int>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  IntMatrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (Int x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline BoundVec finite_bounds(std::initializer_list<Int> vals) {
  BoundVec b;
  b.reserve(vals.size());
  for (Int x : vals) b.push_back(Bound::finite(x));
  return b;
}

inline BoundVec uniform_bounds(Index count, Int v) {
  BoundVec b;
  b.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) b.push_back(Bound::finite(v));
  return b;
}

// n copies of the same linking and diagonal block.
inline InstanceData uniform_blocks(Index n, const IntMatrix& top,
                                   const IntMatrix& diag) {
  InstanceData d;
  d.n = n;
  d.r = top.rows();
  d.s = diag.rows();
  d.t = top.cols();
  for (Index i = 0; i < n; ++i) {
    d.top_blocks.push_back(top);
    d.diag_blocks.push_back(diag);
  }
  return d;
}

inline TreeData tree_of(Index cols,
                        std::initializer_list<TreeBlockData> blocks,
                        BoundVec lower, BoundVec upper, IntVector costs) {
  TreeData d;
  d.num_cols = cols;
  for (const TreeBlockData& b : blocks) d.blocks.push_back(b);
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  d.objective = LinearObjective{std::move(costs)};
  return d;
}

inline TreeBlockData tree_block(IntMatrix m, IntVector rhs) {
  return TreeBlockData{std::move(m), std::move(rhs)};
}

}  // namespace foldip::testing
