// SPDX-License-Identifier: Apache-2.0
#include "foldip/oracle.hpp"

#include <algorithm>

namespace foldip {

namespace {

constexpr Int kFastMagnitude = Int(1) << 61;

// Incrementally maintained objective value while the box scan walks.
class ValueTracker {
 public:
  ValueTracker(const Objective& obj, const IntVector& x) : obj_(&obj) {
    value_ = 0;
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, LinearObjective>) {
            for (Index j = 0; j < x.size(); ++j)
              value_ += BigInt(o.c[j]) * x[j];
          } else {
            for (Index j = 0; j < x.size(); ++j)
              value_ += eval_term(o.terms[j], BigInt(x[j]));
          }
        },
        obj);
  }

  void on_change(Index j, Int old_v, Int new_v) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, LinearObjective>) {
            value_ += BigInt(o.c[j]) * (BigInt(new_v) - old_v);
          } else {
            value_ += eval_term(o.terms[j], BigInt(new_v)) -
                      eval_term(o.terms[j], BigInt(old_v));
          }
        },
        *obj_);
  }

  const BigInt& value() const { return value_; }

 private:
  const Objective* obj_;
  BigInt value_;
};

template <class S>
OracleResult scan_box(const IntMatrix& matrix, const IntVector& rhs,
                      const IntVector& lo, const IntVector& hi,
                      const Objective& obj) {
  const Index m = matrix.rows();
  const Index d = matrix.cols();
  const bool maximize = is_linear(obj);

  IntVector x = lo;
  std::vector<S> res(m);
  for (Index i = 0; i < m; ++i) {
    BigInt v = rhs[i];
    for (Index j = 0; j < d; ++j) v -= BigInt(matrix(i, j)) * lo[j];
    if constexpr (std::is_same_v<S, Int>)
      res[i] = to_int64(v);
    else
      res[i] = v;
  }

  ValueTracker val(obj, x);
  bool found = false;
  IntVector best_x;
  BigInt best_value;

  for (;;) {
    bool feasible = true;
    for (Index i = 0; i < m; ++i)
      if (res[i] != 0) {
        feasible = false;
        break;
      }
    if (feasible) {
      if (!found || (maximize ? val.value() > best_value
                              : val.value() < best_value)) {
        found = true;
        best_x = x;
        best_value = val.value();
      }
    }

    Index j = 0;
    while (j < d && x[j] == hi[j]) {
      val.on_change(j, x[j], lo[j]);
      const S width = S(hi[j]) - S(lo[j]);
      for (Index i = 0; i < m; ++i) res[i] += S(matrix(i, j)) * width;
      x[j] = lo[j];
      ++j;
    }
    if (j == d) break;
    val.on_change(j, x[j], x[j] + 1);
    x[j] += 1;
    for (Index i = 0; i < m; ++i) res[i] -= S(matrix(i, j));
  }

  OracleResult out;
  if (found) {
    out.status = OracleResult::Status::Optimal;
    out.x = best_x;
    out.value = best_value;
  }
  return out;
}

}  // namespace

OracleResult brute_force_solve_dense(const IntMatrix& matrix,
                                     const IntVector& rhs, const BoundVec& lower,
                                     const BoundVec& upper, const Objective& obj,
                                     const BigInt& box_cap) {
  const Index m = matrix.rows();
  const Index d = matrix.cols();
  require(rhs.size() == m, ErrorCode::DimensionMismatch, "rhs length");
  require(static_cast<Index>(lower.size()) == d &&
              static_cast<Index>(upper.size()) == d,
          ErrorCode::DimensionMismatch, "bounds length");
  require(d >= 1, ErrorCode::DimensionMismatch, "no variables");

  IntVector lo(d), hi(d);
  BigInt volume = 1;
  for (Index j = 0; j < d; ++j) {
    require(lower[j].is_finite() && upper[j].is_finite(),
            ErrorCode::InfiniteBoundsUnsupported,
            "box scan needs finite bounds");
    lo[j] = lower[j].value();
    hi[j] = upper[j].value();
    require(lo[j] <= hi[j], ErrorCode::InconsistentBounds, "empty box");
    volume *= BigInt(hi[j]) - lo[j] + 1;
    require(volume <= box_cap, ErrorCode::BoxTooLarge,
            "bound box has more than box_cap points");
  }

  // Residuals stay in int64 whenever the worst-case magnitude allows it.
  BigInt worst = 0;
  for (Index i = 0; i < m; ++i) {
    BigInt row = abs(BigInt(rhs[i]));
    for (Index j = 0; j < d; ++j) {
      BigInt corner = std::max(abs(BigInt(lo[j])), abs(BigInt(hi[j])));
      row += abs(BigInt(matrix(i, j))) * corner;
    }
    if (row > worst) worst = row;
  }

  if (worst <= kFastMagnitude)
    return scan_box<Int>(matrix, rhs, lo, hi, obj);
  return scan_box<BigInt>(matrix, rhs, lo, hi, obj);
}

OracleResult brute_force_solve(const Instance& inst, const BigInt& box_cap) {
  return brute_force_solve_dense(assemble_matrix(inst), inst.rhs(),
                                 inst.lower(), inst.upper(), inst.objective(),
                                 box_cap);
}

BigInt l1_norm(const IntVector& v) {
  BigInt acc = 0;
  for (Index i = 0; i < v.size(); ++i) acc += v[i] < 0 ? -BigInt(v[i]) : BigInt(v[i]);
  return acc;
}

bool conforms_to(const IntVector& v, const IntVector& u) {
  if (v.size() != u.size()) return false;
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0 && (u[i] < v[i])) return false;
    if (v[i] < 0 && (u[i] > v[i])) return false;
  }
  return true;
}

namespace {

struct KernelSearch {
  const IntMatrix& matrix;
  Index m, d;
  // suffix_row_max[i][row]: largest |entry| of `row` among columns >= i
  std::vector<std::vector<Int>> suffix_row_max;
  std::vector<Int> x;
  std::vector<Int> sums;
  std::uint64_t nodes = 0;
  std::uint64_t node_budget;
  std::vector<IntVector> out;

  KernelSearch(const IntMatrix& mat, std::uint64_t budget)
      : matrix(mat), m(mat.rows()), d(mat.cols()), node_budget(budget) {
    suffix_row_max.assign(d + 1, std::vector<Int>(m, 0));
    for (Index i = d; i-- > 0;)
      for (Index row = 0; row < m; ++row) {
        Int a = matrix(row, i) < 0 ? -matrix(row, i) : matrix(row, i);
        suffix_row_max[i][row] = std::max(suffix_row_max[i + 1][row], a);
      }
    x.assign(d, 0);
    sums.assign(m, 0);
  }

  void charge() {
    if (++nodes > node_budget)
      fail(ErrorCode::CapTooLarge, "kernel enumeration exceeded node budget");
  }

  bool reachable(Index next, Int budget) const {
    for (Index row = 0; row < m; ++row) {
      Int mag = sums[row] < 0 ? -sums[row] : sums[row];
      if (mag > budget * suffix_row_max[next][row]) return false;
    }
    return true;
  }

  void emit_if_nonzero() {
    for (Index j = 0; j < d; ++j)
      if (x[j] != 0) {
        out.push_back(Eigen::Map<const IntVector>(x.data(), d));
        return;
      }
  }

  // The final coordinate is solved, not enumerated: every row pins it (or
  // leaves it free when the last column is all zero).
  void last_column(Int budget) {
    const Index i = d - 1;
    charge();
    Index pivot = -1;
    for (Index row = 0; row < m; ++row)
      if (matrix(row, i) != 0) {
        pivot = row;
        break;
      }
    if (pivot < 0) {
      for (Index row = 0; row < m; ++row)
        if (sums[row] != 0) return;
      for (Int v = -budget; v <= budget; ++v) {
        charge();
        x[i] = v;
        emit_if_nonzero();
      }
      x[i] = 0;
      return;
    }
    Int a = matrix(pivot, i);
    if (sums[pivot] % a != 0) return;
    Int v = -(sums[pivot] / a);
    if (v > budget || -v > budget) return;
    for (Index row = 0; row < m; ++row)
      if (sums[row] + matrix(row, i) * v != 0) return;
    x[i] = v;
    emit_if_nonzero();
    x[i] = 0;
  }

  void dfs(Index i, Int budget) {
    if (i == d - 1) {
      last_column(budget);
      return;
    }
    for (Int v = -budget; v <= budget; ++v) {
      charge();
      x[i] = v;
      for (Index row = 0; row < m; ++row) sums[row] += matrix(row, i) * v;
      Int rem = budget - (v < 0 ? -v : v);
      if (reachable(i + 1, rem)) dfs(i + 1, rem);
      for (Index row = 0; row < m; ++row) sums[row] -= matrix(row, i) * v;
    }
    x[i] = 0;
  }
};

}  // namespace

std::vector<IntVector> enumerate_kernel(const IntMatrix& matrix,
                                        const BigInt& cap,
                                        std::uint64_t node_budget) {
  require(cap >= 0, ErrorCode::InternalError, "negative norm cap");
  Int delta = 0;
  for (Index i = 0; i < matrix.rows(); ++i)
    for (Index j = 0; j < matrix.cols(); ++j)
      delta = std::max(delta, matrix(i, j) < 0 ? -matrix(i, j) : matrix(i, j));
  require(cap <= kFastMagnitude && BigInt(delta) * cap <= kFastMagnitude,
          ErrorCode::CapTooLarge, "norm cap too large to enumerate");

  KernelSearch search(matrix, node_budget);
  search.dfs(0, to_int64(cap));
  return std::move(search.out);
}

// A kernel element is decomposable exactly when a kernel element of smaller
// 1-norm conforms to it (their norms cannot tie without being equal), so
// scanning in norm order against the already-accepted elements suffices.
std::vector<IntVector> enumerate_graver(const IntMatrix& matrix,
                                        const BigInt& cap,
                                        std::uint64_t node_budget) {
  std::vector<IntVector> kernel = enumerate_kernel(matrix, cap, node_budget);
  std::stable_sort(kernel.begin(), kernel.end(),
                   [](const IntVector& a, const IntVector& b) {
                     Int na = 0, nb = 0;
                     for (Index i = 0; i < a.size(); ++i)
                       na += a[i] < 0 ? -a[i] : a[i];
                     for (Index i = 0; i < b.size(); ++i)
                       nb += b[i] < 0 ? -b[i] : b[i];
                     return na < nb;
                   });
  std::vector<IntVector> out;
  for (const IntVector& u : kernel) {
    bool dominated = false;
    for (const IntVector& g : out)
      if (conforms_to(g, u)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(u);
  }
  return out;
}

BoundCheck check_bound(const std::vector<IntVector>& graver,
                       const BigInt& bound) {
  BigInt max_norm = 0;
  for (const IntVector& g : graver) {
    BigInt n = l1_norm(g);
    if (n > max_norm) max_norm = n;
  }
  require(max_norm <= bound, ErrorCode::BoundViolated,
          "Graver element norm " + to_string(max_norm) + " exceeds bound " +
              to_string(bound));
  return BoundCheck{max_norm, bound};
}

bool decomposes_over(const IntVector& x, const std::vector<IntVector>& graver) {
  IntVector rest = x;
  for (;;) {
    bool zero = true;
    for (Index i = 0; i < rest.size(); ++i)
      if (rest[i] != 0) {
        zero = false;
        break;
      }
    if (zero) return true;
    bool advanced = false;
    for (const IntVector& g : graver) {
      if (conforms_to(g, rest)) {
        bool gz = true;
        for (Index i = 0; i < g.size(); ++i)
          if (g[i] != 0) {
            gz = false;
            break;
          }
        if (gz) continue;
        rest -= g;
        advanced = true;
        break;
      }
    }
    if (!advanced) return false;
  }
}

}  // namespace foldip
