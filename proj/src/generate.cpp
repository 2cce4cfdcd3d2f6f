// SPDX-License-Identifier: Apache-2.0
#include "foldip/generate.hpp"

#include <algorithm>

#include "foldip/rng.hpp"

namespace foldip {

namespace {

IntMatrix random_matrix(Rng& rng, Index rows, Index cols, Int delta) {
  IntMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-delta, delta);
  return m;
}

ConvexTerm random_term(Rng& rng, Int cost_max) {
  switch (rng.uniform(0, 3)) {
    case 0:
      return LinearTerm{rng.uniform(-cost_max, cost_max)};
    case 1:
      return QuadraticTerm{rng.uniform(0, 2), rng.uniform(-cost_max, cost_max),
                           rng.uniform(-2, 2)};
    case 2:
      return AbsTerm{rng.uniform(0, 3), rng.uniform(-2, 2)};
    default: {
      PwlTerm pwl;
      const Int nb = rng.uniform(1, 2);
      Int at = rng.uniform(-3, 0);
      for (Int k = 0; k < nb; ++k) {
        pwl.breaks.push_back(at);
        at += rng.uniform(1, 3);
      }
      Int slope = rng.uniform(-3, 0);
      for (Int k = 0; k <= nb; ++k) {
        pwl.slopes.push_back(slope);
        slope += rng.uniform(0, 2);
      }
      return pwl;
    }
  }
}

}  // namespace

Instance generate_instance(const GenSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  InstanceData d;
  d.n = spec.n;
  d.r = spec.r;
  d.s = spec.s;
  d.t = spec.t;
  for (Index i = 0; i < spec.n; ++i)
    d.top_blocks.push_back(random_matrix(rng, spec.r, spec.t, spec.delta));
  for (Index i = 0; i < spec.n; ++i)
    d.diag_blocks.push_back(random_matrix(rng, spec.s, spec.t, spec.delta));

  const Index nv = spec.n * spec.t;
  d.lower.reserve(static_cast<std::size_t>(nv));
  d.upper.reserve(static_cast<std::size_t>(nv));
  IntVector probe(nv);
  for (Index j = 0; j < nv; ++j) {
    const Int lo = rng.uniform(-spec.box, spec.box);
    const Int hi = lo + rng.uniform(0, spec.box);
    probe[j] = rng.uniform(lo, hi);
    d.lower.push_back(spec.inf_frac > 0 && rng.chance(spec.inf_frac)
                          ? Bound::neg_inf()
                          : Bound::finite(lo));
    d.upper.push_back(spec.inf_frac > 0 && rng.chance(spec.inf_frac)
                          ? Bound::pos_inf()
                          : Bound::finite(hi));
  }

  d.rhs = IntVector::Zero(spec.r + spec.n * spec.s);
  if (spec.feasible) {
    for (Index i = 0; i < spec.n; ++i)
      for (Index q = 0; q < spec.t; ++q) {
        const Int x = probe[i * spec.t + q];
        if (x == 0) continue;
        for (Index k = 0; k < spec.r; ++k)
          d.rhs[k] += d.top_blocks[static_cast<std::size_t>(i)](k, q) * x;
        for (Index k = 0; k < spec.s; ++k)
          d.rhs[spec.r + i * spec.s + k] +=
              d.diag_blocks[static_cast<std::size_t>(i)](k, q) * x;
      }
  } else {
    for (Index i = 0; i < d.rhs.size(); ++i)
      d.rhs[i] = rng.uniform(-spec.delta * spec.box, spec.delta * spec.box);
  }

  if (spec.convex) {
    ConvexObjective obj;
    for (Index j = 0; j < nv; ++j) obj.terms.push_back(random_term(rng, spec.cost_max));
    d.objective = std::move(obj);
  } else {
    LinearObjective obj;
    obj.c = IntVector(nv);
    for (Index j = 0; j < nv; ++j) obj.c[j] = rng.uniform(-spec.cost_max, spec.cost_max);
    d.objective = std::move(obj);
  }
  return Instance::validate(std::move(d));
}

TreeInstance generate_tree(const TreeGenSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> per_mid = spec.mid_leaves;
  if (per_mid.empty() && spec.mids > 0) per_mid.assign(spec.mids, spec.leaves);
  Index leaf_count = 0;
  for (Index k : per_mid) {
    require(k >= 1, ErrorCode::EmptyInstance, "middle node without leaves");
    leaf_count += k;
  }
  const Index width_units =
      per_mid.empty() ? std::max<Index>(1, spec.leaves) : leaf_count;
  const Index n = width_units * spec.cols_per_leaf;

  // structural supports: leaves partition the columns, middles own
  // consecutive runs of leaves, the root owns everything; forcing one
  // nonzero per supported column keeps the derived tree equal to this shape
  struct Shape {
    Index rows;
    Index col_lo, col_hi;  // half open
  };
  std::vector<Shape> shapes;
  shapes.push_back(Shape{spec.rows_root, 0, n});
  Index leaf_lo = 0;
  for (Index k : per_mid) {
    shapes.push_back(Shape{spec.rows_mid, leaf_lo * spec.cols_per_leaf,
                           (leaf_lo + k) * spec.cols_per_leaf});
    leaf_lo += k;
  }
  for (Index l = 0; l < leaf_count; ++l)
    shapes.push_back(Shape{spec.rows_leaf, l * spec.cols_per_leaf,
                           (l + 1) * spec.cols_per_leaf});

  TreeData d;
  d.num_cols = n;
  for (const Shape& sh : shapes) {
    TreeBlockData blk;
    blk.matrix = IntMatrix::Zero(sh.rows, n);
    for (Index i = 0; i < sh.rows; ++i)
      for (Index q = sh.col_lo; q < sh.col_hi; ++q)
        blk.matrix(i, q) = rng.uniform(-spec.delta, spec.delta);
    for (Index q = sh.col_lo; q < sh.col_hi; ++q) {
      bool covered = false;
      for (Index i = 0; i < sh.rows && !covered; ++i)
        covered = blk.matrix(i, q) != 0;
      if (!covered) {
        const Index row = rng.uniform(0, sh.rows - 1);
        const Int mag = rng.uniform(1, std::max<Int>(1, spec.delta));
        blk.matrix(row, q) = rng.chance(0.5) ? mag : -mag;
      }
    }
    blk.rhs = IntVector::Zero(sh.rows);
    d.blocks.push_back(std::move(blk));
  }

  IntVector probe(n);
  for (Index j = 0; j < n; ++j) {
    const Int lo = rng.uniform(-spec.box, spec.box);
    const Int hi = lo + rng.uniform(0, spec.box);
    probe[j] = rng.uniform(lo, hi);
    d.lower.push_back(Bound::finite(lo));
    d.upper.push_back(Bound::finite(hi));
  }
  if (spec.feasible) {
    for (TreeBlockData& blk : d.blocks)
      for (Index i = 0; i < blk.matrix.rows(); ++i) {
        Int acc = 0;
        for (Index q = 0; q < n; ++q) acc += blk.matrix(i, q) * probe[q];
        blk.rhs[i] = acc;
      }
  } else {
    for (TreeBlockData& blk : d.blocks)
      for (Index i = 0; i < blk.rhs.size(); ++i)
        blk.rhs[i] = rng.uniform(-spec.delta * spec.box, spec.delta * spec.box);
  }

  LinearObjective obj;
  obj.c = IntVector(n);
  for (Index j = 0; j < n; ++j) obj.c[j] = rng.uniform(-spec.cost_max, spec.cost_max);
  d.objective = std::move(obj);
  return TreeInstance::validate(std::move(d));
}

}  // namespace foldip
