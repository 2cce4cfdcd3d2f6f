// SPDX-License-Identifier: Apache-2.0
#include "foldip/instance.hpp"

namespace foldip {

namespace {

void check_entry(Int v, const char* where) {
  require(v >= -kMaxEntryMagnitude && v <= kMaxEntryMagnitude,
          ErrorCode::EntryTooLarge, std::string(where) + " entry out of range");
}

Int max_abs(const IntMatrix& m) {
  Int best = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      Int a = m(i, j) < 0 ? -m(i, j) : m(i, j);
      if (a > best) best = a;
    }
  return best;
}

}  // namespace

Instance Instance::validate(InstanceData data) {
  require(data.n >= 1 && data.r >= 1 && data.s >= 1 && data.t >= 1,
          ErrorCode::EmptyInstance, "n, r, s, t must all be at least 1");
  require(static_cast<Index>(data.top_blocks.size()) == data.n,
          ErrorCode::DimensionMismatch, "expected n linking blocks");
  require(static_cast<Index>(data.diag_blocks.size()) == data.n,
          ErrorCode::DimensionMismatch, "expected n diagonal blocks");

  Int delta = 0;
  for (Index i = 0; i < data.n; ++i) {
    const IntMatrix& a = data.top_blocks[i];
    const IntMatrix& b = data.diag_blocks[i];
    require(a.rows() == data.r && a.cols() == data.t,
            ErrorCode::DimensionMismatch, "linking block has wrong shape");
    require(b.rows() == data.s && b.cols() == data.t,
            ErrorCode::DimensionMismatch, "diagonal block has wrong shape");
    for (Index p = 0; p < a.rows(); ++p)
      for (Index q = 0; q < a.cols(); ++q) check_entry(a(p, q), "matrix");
    for (Index p = 0; p < b.rows(); ++p)
      for (Index q = 0; q < b.cols(); ++q) check_entry(b(p, q), "matrix");
    delta = std::max({delta, max_abs(a), max_abs(b)});
  }

  const Index nv = data.n * data.t;
  require(data.rhs.size() == data.r + data.n * data.s,
          ErrorCode::DimensionMismatch, "right-hand side has wrong length");
  for (Index i = 0; i < data.rhs.size(); ++i) check_entry(data.rhs[i], "rhs");

  require(static_cast<Index>(data.lower.size()) == nv &&
              static_cast<Index>(data.upper.size()) == nv,
          ErrorCode::DimensionMismatch, "bounds have wrong length");
  for (Index j = 0; j < nv; ++j) {
    const Bound& lo = data.lower[j];
    const Bound& hi = data.upper[j];
    require(!lo.is_pos_inf() && !hi.is_neg_inf(), ErrorCode::InconsistentBounds,
            "lower bound +inf or upper bound -inf");
    if (lo.is_finite()) check_entry(lo.value(), "bound");
    if (hi.is_finite()) check_entry(hi.value(), "bound");
    if (lo.is_finite() && hi.is_finite())
      require(lo.value() <= hi.value(), ErrorCode::InconsistentBounds,
              "lower bound exceeds upper bound");
  }

  std::visit(
      [&](const auto& obj) {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, LinearObjective>) {
          require(obj.c.size() == nv, ErrorCode::BadObjective,
                  "objective has wrong length");
          for (Index j = 0; j < nv; ++j) check_entry(obj.c[j], "objective");
        } else {
          require(static_cast<Index>(obj.terms.size()) == nv,
                  ErrorCode::BadObjective, "objective has wrong length");
          for (const ConvexTerm& term : obj.terms) validate_term(term);
        }
      },
      data.objective);

  return Instance(std::move(data), delta);
}

IntMatrix assemble_matrix(const Instance& inst) {
  const Index rows = inst.num_rows();
  const Index cols = inst.num_vars();
  IntMatrix m = IntMatrix::Zero(rows, cols);
  for (Index i = 0; i < inst.n(); ++i) {
    m.block(0, i * inst.t(), inst.r(), inst.t()) = inst.top_block(i);
    m.block(inst.r() + i * inst.s(), i * inst.t(), inst.s(), inst.t()) =
        inst.diag_block(i);
  }
  return m;
}

BigVector residual(const Instance& inst, const IntVector& x) {
  require(x.size() == inst.num_vars(), ErrorCode::DimensionMismatch,
          "point has wrong length");
  BigVector res(inst.num_rows());
  for (Index i = 0; i < inst.num_rows(); ++i) res[i] = inst.rhs()[i];
  for (Index i = 0; i < inst.n(); ++i) {
    const IntMatrix& a = inst.top_block(i);
    const IntMatrix& b = inst.diag_block(i);
    for (Index q = 0; q < inst.t(); ++q) {
      const BigInt xv = x[i * inst.t() + q];
      if (xv == 0) continue;
      for (Index p = 0; p < inst.r(); ++p) res[p] -= BigInt(a(p, q)) * xv;
      for (Index p = 0; p < inst.s(); ++p)
        res[inst.r() + i * inst.s() + p] -= BigInt(b(p, q)) * xv;
    }
  }
  return res;
}

bool within_bounds(const Instance& inst, const IntVector& x) {
  for (Index j = 0; j < inst.num_vars(); ++j)
    if (!inst.in_bounds(j, BigInt(x[j]))) return false;
  return true;
}

BigInt objective_value(const Instance& inst, const IntVector& x) {
  return std::visit(
      [&](const auto& obj) -> BigInt {
        using T = std::decay_t<decltype(obj)>;
        BigInt acc = 0;
        if constexpr (std::is_same_v<T, LinearObjective>) {
          for (Index j = 0; j < x.size(); ++j)
            acc += BigInt(obj.c[j]) * x[j];
        } else {
          for (Index j = 0; j < x.size(); ++j)
            acc += eval_term(obj.terms[j], BigInt(x[j]));
        }
        return acc;
      },
      inst.objective());
}

Solution checked_solution(const Instance& inst, const IntVector& x) {
  require(within_bounds(inst, x), ErrorCode::InternalError,
          "solution violates bounds");
  BigVector res = residual(inst, x);
  for (Index i = 0; i < res.size(); ++i)
    require(res[i] == 0, ErrorCode::InternalError, "solution violates equations");
  return Solution{x, objective_value(inst, x)};
}

}  // namespace foldip
