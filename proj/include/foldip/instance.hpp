// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "foldip/errors.hpp"
#include "foldip/numeric.hpp"
#include "foldip/objective.hpp"

namespace foldip {

// One variable bound, possibly infinite.
class Bound {
 public:
  static Bound finite(Int v) { return Bound(Kind::Finite, v); }
  static Bound neg_inf() { return Bound(Kind::NegInf, 0); }
  static Bound pos_inf() { return Bound(Kind::PosInf, 0); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  Int value() const { return value_; }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }

 private:
  enum class Kind { Finite, NegInf, PosInf };
  Bound(Kind k, Int v) : kind_(k), value_(v) {}
  Kind kind_;
  Int value_;
};

using BoundVec = std::vector<Bound>;

inline bool all_finite(const BoundVec& l, const BoundVec& u) {
  for (const Bound& b : l)
    if (!b.is_finite()) return false;
  for (const Bound& b : u)
    if (!b.is_finite()) return false;
  return true;
}

inline bool is_zero(const BigVector& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

// Raw block data before validation.  The constraint matrix is
//
//   [ A(1) A(2) ... A(n) ]           (r linking rows)
//   [ B(1)              ]
//   [      B(2)         ]            (s rows per block)
//   [            ...    ]
//   [             B(n)  ]
//
// with n bricks of t variables each.
struct InstanceData {
  Index n = 0, r = 0, s = 0, t = 0;
  std::vector<IntMatrix> top_blocks;   // n matrices, r x t
  std::vector<IntMatrix> diag_blocks;  // n matrices, s x t
  IntVector rhs;                       // length r + n*s
  BoundVec lower, upper;               // length n*t
  Objective objective = LinearObjective{};
};

class Instance {
 public:
  // Checks shapes, bound consistency, entry magnitudes, and the objective;
  // throws Error.  Instances are immutable once built.
  static Instance validate(InstanceData data);

  Index n() const { return data_.n; }
  Index r() const { return data_.r; }
  Index s() const { return data_.s; }
  Index t() const { return data_.t; }
  Index num_vars() const { return data_.n * data_.t; }
  Index num_rows() const { return data_.r + data_.n * data_.s; }

  const IntMatrix& top_block(Index i) const { return data_.top_blocks[i]; }
  const IntMatrix& diag_block(Index i) const { return data_.diag_blocks[i]; }
  const IntVector& rhs() const { return data_.rhs; }
  const BoundVec& lower() const { return data_.lower; }
  const BoundVec& upper() const { return data_.upper; }
  const Objective& objective() const { return data_.objective; }
  const InstanceData& data() const { return data_; }

  // Largest absolute entry over all blocks.
  Int delta() const { return delta_; }

  bool has_finite_bounds() const { return all_finite(data_.lower, data_.upper); }

  bool in_bounds(Index j, const BigInt& v) const {
    const Bound& lo = data_.lower[j];
    const Bound& hi = data_.upper[j];
    if (lo.is_finite() && v < lo.value()) return false;
    if (hi.is_finite() && v > hi.value()) return false;
    return true;
  }

 private:
  explicit Instance(InstanceData data, Int delta)
      : data_(std::move(data)), delta_(delta) {}
  InstanceData data_;
  Int delta_;
};

// Dense (r + n*s) x (n*t) matrix with the blocks in place.
IntMatrix assemble_matrix(const Instance& inst);

// rhs - matrix * x, computed blockwise without forming the dense matrix.
BigVector residual(const Instance& inst, const IntVector& x);

bool within_bounds(const Instance& inst, const IntVector& x);

// Objective value of x under the instance objective (c^T x, or the sum of
// convex terms).
BigInt objective_value(const Instance& inst, const IntVector& x);

struct Solution {
  IntVector x;
  BigInt value;
};

// Builds a Solution after asserting feasibility; InternalError otherwise.
Solution checked_solution(const Instance& inst, const IntVector& x);

}  // namespace foldip
