// SPDX-License-Identifier: Apache-2.0
#include "foldip/lp.hpp"

namespace foldip {

namespace {

// Bounded-variable primal simplex over exact rationals.  Bland's rule on
// both the entering and leaving choice keeps it finite; all arithmetic is
// element-wise (see numeric.hpp on multiprecision matrices).
class Simplex {
 public:
  Simplex(const IntMatrix& matrix, const IntVector& rhs, const BoundVec& lower,
          const BoundVec& upper)
      : m_(matrix.rows()), n_(matrix.cols()), total_(n_ + m_) {
    lo_.resize(total_);
    hi_.resize(total_);
    lo_inf_.assign(total_, false);
    hi_inf_.assign(total_, false);
    val_.resize(total_);
    status_.assign(total_, NB::Lower);

    for (Index j = 0; j < n_; ++j) {
      if (lower[j].is_finite())
        lo_[j] = lower[j].value();
      else
        lo_inf_[j] = true;
      if (upper[j].is_finite())
        hi_[j] = upper[j].value();
      else
        hi_inf_[j] = true;
      if (!lo_inf_[j]) {
        status_[j] = NB::Lower;
        val_[j] = lo_[j];
      } else if (!hi_inf_[j]) {
        status_[j] = NB::Upper;
        val_[j] = hi_[j];
      } else {
        status_[j] = NB::Zero;
        val_[j] = 0;
      }
    }

    // Artificial columns are sign(residual) * e_i so they start feasible
    // at value |residual|.
    RationalVector res(m_);
    for (Index i = 0; i < m_; ++i) {
      Rational acc = rhs[i];
      for (Index j = 0; j < n_; ++j)
        if (!(val_[j] == 0)) acc -= Rational(matrix(i, j)) * val_[j];
      res[i] = acc;
    }

    T_.resize(m_, total_);
    basis_.resize(m_);
    for (Index i = 0; i < m_; ++i) {
      Int sg = res[i] < 0 ? -1 : 1;
      for (Index j = 0; j < n_; ++j) T_(i, j) = Rational(matrix(i, j)) * sg;
      for (Index k = 0; k < m_; ++k) T_(i, n_ + k) = (i == k) ? 1 : 0;
      Index art = n_ + i;
      basis_[i] = art;
      status_[art] = NB::Basic;
      lo_[art] = 0;
      hi_inf_[art] = true;
      val_[art] = res[i] < 0 ? -res[i] : res[i];
    }
  }

  // Maximizes the given objective from the current basis; false on
  // unbounded.
  bool optimize(const std::vector<Rational>& cost) {
    // Bland's rule already rules out cycling; the cap turns any latent
    // bug into a hard error instead of a hang.
    constexpr long kPivotCap = 4'000'000;
    long pivots = 0;
    for (;;) {
      require(pivots++ < kPivotCap, ErrorCode::InternalError,
              "simplex pivot cap exceeded");
      // reduced costs against the basic cost vector
      Index enter = -1;
      int dir = 0;
      for (Index j = 0; j < total_; ++j) {
        if (status_[j] == NB::Basic) continue;
        if (!lo_inf_[j] && !hi_inf_[j] && lo_[j] == hi_[j]) continue;
        Rational rc = cost[j];
        for (Index i = 0; i < m_; ++i) {
          if (T_(i, j) == 0) continue;
          const Rational& cb = cost[basis_[i]];
          if (!(cb == 0)) rc -= cb * T_(i, j);
        }
        int d = 0;
        if (status_[j] == NB::Lower && rc > 0) d = 1;
        else if (status_[j] == NB::Upper && rc < 0) d = -1;
        else if (status_[j] == NB::Zero && !(rc == 0)) d = rc > 0 ? 1 : -1;
        if (d != 0) {
          enter = j;
          dir = d;
          break;  // Bland: smallest improving index
        }
      }
      if (enter < 0) return true;

      // ratio test: smallest step over all blocking bounds
      bool have_theta = false;
      Rational theta;
      Index leave_row = -1;    // -1 with have_theta means a bound flip
      Index leave_var = -1;

      if ((dir > 0 && !hi_inf_[enter]) || (dir < 0 && !lo_inf_[enter])) {
        theta = dir > 0 ? hi_[enter] - val_[enter] : val_[enter] - lo_[enter];
        have_theta = true;
        leave_var = enter;
      }
      for (Index i = 0; i < m_; ++i) {
        Rational q = T_(i, enter) * dir;
        if (q == 0) continue;
        const Index bv = basis_[i];
        Rational limit;
        if (q > 0) {
          if (lo_inf_[bv]) continue;
          limit = (val_[bv] - lo_[bv]) / q;
        } else {
          if (hi_inf_[bv]) continue;
          limit = (hi_[bv] - val_[bv]) / -q;
        }
        if (!have_theta || limit < theta ||
            (limit == theta && bv < leave_var)) {
          have_theta = true;
          theta = limit;
          leave_row = i;
          leave_var = bv;
        }
      }
      if (!have_theta) return false;  // improving ray

      // move
      if (!(theta == 0)) {
        for (Index i = 0; i < m_; ++i) {
          if (T_(i, enter) == 0) continue;
          val_[basis_[i]] -= theta * Rational(dir) * T_(i, enter);
        }
        val_[enter] += theta * Rational(dir);
      }

      if (leave_var == enter) {
        status_[enter] = dir > 0 ? NB::Upper : NB::Lower;
        continue;
      }

      // pivot: leave_var exits to the bound it hit
      Rational q = T_(leave_row, enter) * dir;
      status_[leave_var] = q > 0 ? NB::Lower : NB::Upper;
      val_[leave_var] = q > 0 ? lo_[leave_var] : hi_[leave_var];
      basis_[leave_row] = enter;
      status_[enter] = NB::Basic;

      const Rational piv = T_(leave_row, enter);
      for (Index j = 0; j < total_; ++j)
        if (!(T_(leave_row, j) == 0)) T_(leave_row, j) /= piv;
      for (Index i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        const Rational f = T_(i, enter);
        if (f == 0) continue;
        for (Index j = 0; j < total_; ++j)
          if (!(T_(leave_row, j) == 0)) T_(i, j) -= f * T_(leave_row, j);
      }
    }
  }

  LPResult run(const IntVector& costs) {
    std::vector<Rational> phase1(total_, Rational(0));
    for (Index k = 0; k < m_; ++k) phase1[n_ + k] = -1;
    bool bounded = optimize(phase1);
    require(bounded, ErrorCode::InternalError, "phase-1 objective unbounded");

    Rational infeas = 0;
    for (Index k = 0; k < m_; ++k) infeas += val_[n_ + k];
    LPResult out;
    if (!(infeas == 0)) {
      out.status = LPResult::Status::Infeasible;
      return out;
    }
    for (Index k = 0; k < m_; ++k) {
      hi_[n_ + k] = 0;
      hi_inf_[n_ + k] = false;
    }

    std::vector<Rational> phase2(total_, Rational(0));
    for (Index j = 0; j < n_; ++j) phase2[j] = costs[j];
    if (!optimize(phase2)) {
      out.status = LPResult::Status::Unbounded;
      return out;
    }

    out.status = LPResult::Status::Optimal;
    out.x.resize(n_);
    out.value = 0;
    for (Index j = 0; j < n_; ++j) {
      out.x[j] = val_[j];
      if (costs[j] != 0) out.value += Rational(costs[j]) * val_[j];
    }
    out.basis = basis_;
    return out;
  }

 private:
  enum class NB { Lower, Upper, Zero, Basic };

  Index m_, n_, total_;
  RationalMatrix T_;
  std::vector<Rational> lo_, hi_;
  std::vector<bool> lo_inf_, hi_inf_;
  std::vector<Rational> val_;
  std::vector<NB> status_;
  std::vector<Index> basis_;
};

}  // namespace

LPResult solve_lp_dense(const IntMatrix& matrix, const IntVector& rhs,
                        const BoundVec& lower, const BoundVec& upper,
                        const IntVector& costs) {
  require(rhs.size() == matrix.rows(), ErrorCode::DimensionMismatch, "rhs");
  require(static_cast<Index>(lower.size()) == matrix.cols() &&
              static_cast<Index>(upper.size()) == matrix.cols() &&
              costs.size() == matrix.cols(),
          ErrorCode::DimensionMismatch, "bounds or costs");
  Simplex s(matrix, rhs, lower, upper);
  return s.run(costs);
}

LPResult solve_lp(const Instance& inst) {
  const auto* lin = std::get_if<LinearObjective>(&inst.objective());
  require(lin != nullptr, ErrorCode::BadObjective,
          "relaxation needs a linear objective");
  return solve_lp_dense(assemble_matrix(inst), inst.rhs(), inst.lower(),
                        inst.upper(), lin->c);
}

}  // namespace foldip
