// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "foldip/graver_bounds.hpp"
#include "foldip/instance.hpp"
#include "foldip/numeric.hpp"
#include "foldip/objective.hpp"

namespace foldip {

// Tree-structured block systems: every block row constrains a subset of the
// columns (its support), and the supports form a laminar family whose unique
// maximal element covers all constrained columns.  n-fold systems are the
// depth-two special case.

struct TreeBlockData {
  IntMatrix matrix;
  IntVector rhs;
};

struct TreeData {
  Index num_cols = 0;
  std::vector<TreeBlockData> blocks;
  BoundVec lower, upper;
  Objective objective = LinearObjective{};  // linear only
};

struct TreeNode {
  IntMatrix matrix;               // blocks with equal support, stacked
  IntVector rhs;
  std::vector<Index> support;     // ascending original column ids
  std::vector<Index> private_cols;  // support minus children's supports
  Index parent = -1;
  std::vector<Index> children;
  Index height = 0;               // 0 at leaves
};

class TreeInstance {
 public:
  // Builds the support tree; throws EmptySupport / NotLaminar / NoRoot /
  // DimensionMismatch / BadObjective.
  static TreeInstance validate(TreeData data);

  const TreeData& data() const { return data_; }
  Index num_cols() const { return data_.num_cols; }
  Index num_rows() const { return num_rows_; }
  Int delta() const { return delta_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  Index root() const { return root_; }
  Index tau() const { return static_cast<Index>(layer_row_maxima_.size()); }
  // Largest merged row count per layer; layer = height above the deepest
  // descendant leaf, deepest layer first.
  const std::vector<Index>& layer_row_maxima() const { return layer_row_maxima_; }
  Index sigma() const { return sigma_; }
  // DP positions: node intervals are contiguous, private columns first,
  // children after; columns in no support trail at the end.
  const std::vector<Index>& column_order() const { return column_order_; }
  const std::vector<Index>& loose_cols() const { return loose_cols_; }

  const BoundVec& lower() const { return data_.lower; }
  const BoundVec& upper() const { return data_.upper; }
  const IntVector& linear_costs() const {
    return std::get<LinearObjective>(data_.objective).c;
  }
  bool has_finite_bounds() const { return all_finite(data_.lower, data_.upper); }

 private:
  TreeInstance() = default;
  TreeData data_;
  std::vector<TreeNode> nodes_;
  Index root_ = -1;
  Index num_rows_ = 0;
  Int delta_ = 0;
  std::vector<Index> layer_row_maxima_;
  Index sigma_ = 0;
  std::vector<Index> column_order_;
  std::vector<Index> loose_cols_;
};

// Stacked dense matrix in original block and column order.
IntMatrix assemble_matrix(const TreeInstance& inst);
IntVector assemble_rhs(const TreeInstance& inst);

BigVector residual(const TreeInstance& inst, const IntVector& x);

struct TreeBoundsReport {
  Index num_cols = 0;
  Int delta = 0;
  Index tau = 0;
  Index sigma = 0;
  std::vector<Index> layer_row_maxima;
  BigInt L_tau;
  std::optional<BigInt> gamma;
  BigInt effective;
};

TreeBoundsReport compute_bounds_report(const TreeInstance& inst);

struct TreeAugmentingStep {
  BigVector y;
  BigInt lambda;
  BigInt gain;  // lambda * c^T y
};

// Longest-path search over the tree layering for a best augmenting
// direction at step length lambda; nullopt when no positive-gain direction
// exists.  norm_cap plays the role the Graver bound plays in proofs; the
// returned step may exceed it but dominates every kernel direction within.
std::optional<TreeAugmentingStep> solve_tree_augmentation(
    const TreeInstance& inst, const IntVector& z, const BigInt& lambda,
    const BigInt& norm_cap);

enum class TreeSolveStatus { Optimal, Infeasible, Unbounded };

struct TreeSolveStats {
  BigInt iterations = 0;
  BigInt dp_calls = 0;
  BigInt iteration_cap = 0;
  bool used_lp = false;
  bool used_phase_one = false;
};

struct TreeSolveResult {
  TreeSolveStatus status = TreeSolveStatus::Infeasible;
  std::optional<Solution> solution;
  TreeSolveStats stats;
};

struct TreeSolveOptions {
  std::optional<BigInt> max_iterations;
  std::optional<int> lambda_max_exp;
  int threads = 1;
};

TreeSolveResult solve_treefold(const TreeInstance& inst,
                               const TreeSolveOptions& opts = {});

}  // namespace foldip
