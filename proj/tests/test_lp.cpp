// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "foldip/generate.hpp"
#include "foldip/lp.hpp"
#include "foldip/oracle.hpp"
#include "foldip/rng.hpp"
#include "helpers.hpp"

using namespace foldip;
using namespace foldip::testing;

namespace {

// Rank of a rational matrix by plain Gaussian elimination; exact, so fine
// as a test-side referee.
Index rational_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  Index rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col] / m[row][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    ++row;
    ++rank;
  }
  return rank;
}

// The tight rows at x: every equality row, plus a unit row per variable
// sitting on a finite bound.  A vertex needs these to have full column rank.
bool is_vertex(const IntMatrix& m, const BoundVec& lower, const BoundVec& upper,
               const RationalVector& x) {
  std::vector<std::vector<Rational>> tight;
  for (Index i = 0; i < m.rows(); ++i) {
    std::vector<Rational> row(static_cast<std::size_t>(m.cols()));
    for (Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    tight.push_back(std::move(row));
  }
  for (Index j = 0; j < m.cols(); ++j) {
    const bool at_lo = lower[j].is_finite() && x[j] == Rational(lower[j].value());
    const bool at_hi = upper[j].is_finite() && x[j] == Rational(upper[j].value());
    if (at_lo || at_hi) {
      std::vector<Rational> row(static_cast<std::size_t>(m.cols()));
      row[static_cast<std::size_t>(j)] = 1;
      tight.push_back(std::move(row));
    }
  }
  return rational_rank(std::move(tight)) == m.cols();
}

void check_feasible(const IntMatrix& m, const IntVector& rhs,
                    const BoundVec& lower, const BoundVec& upper,
                    const RationalVector& x) {
  REQUIRE(x.size() == m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    Rational acc = 0;
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) acc += Rational(m(i, j)) * x[j];
    CHECK(acc == Rational(rhs[i]));
  }
  for (Index j = 0; j < m.cols(); ++j) {
    if (lower[j].is_finite()) CHECK(x[j] >= Rational(lower[j].value()));
    if (upper[j].is_finite()) CHECK(x[j] <= Rational(upper[j].value()));
  }
}

}  // namespace

TEST_CASE("a single constraint with slack lands on the expected vertex") {
  // max x subject to x + w = 3, x free, w >= 0
  IntMatrix m = imat({{1, 1}});
  IntVector rhs = ivec({3});
  BoundVec lo;
  lo.push_back(Bound::neg_inf());
  lo.push_back(Bound::finite(0));
  BoundVec hi;
  hi.push_back(Bound::pos_inf());
  hi.push_back(Bound::pos_inf());
  LPResult res = solve_lp_dense(m, rhs, lo, hi, ivec({1, 0}));
  REQUIRE(res.status == LPResult::Status::Optimal);
  CHECK(res.value == 3);
  CHECK(res.x[0] == 3);
  CHECK(res.x[1] == 0);
  CHECK(is_vertex(m, lo, hi, res.x));
}

TEST_CASE("fractional vertices are reported exactly") {
  // 2x = 3 with 0 <= x <= 5: optimum x = 3/2
  IntMatrix m = imat({{2}});
  LPResult res = solve_lp_dense(m, ivec({3}), finite_bounds({0}),
                                finite_bounds({5}), ivec({1}));
  REQUIRE(res.status == LPResult::Status::Optimal);
  CHECK(res.x[0] == Rational(3, 2));
  CHECK(res.value == Rational(3, 2));
}

TEST_CASE("infeasible and unbounded statuses") {
  // x + y = 10 with x, y in [0, 2]
  LPResult inf = solve_lp_dense(imat({{1, 1}}), ivec({10}),
                                finite_bounds({0, 0}), finite_bounds({2, 2}),
                                ivec({1, 0}));
  CHECK(inf.status == LPResult::Status::Infeasible);

  // max x with x - y = 0, both unbounded above
  BoundVec lo = finite_bounds({0, 0});
  BoundVec hi;
  hi.push_back(Bound::pos_inf());
  hi.push_back(Bound::pos_inf());
  LPResult unb =
      solve_lp_dense(imat({{1, -1}}), ivec({0}), lo, hi, ivec({1, 0}));
  CHECK(unb.status == LPResult::Status::Unbounded);
}

TEST_CASE("an equality-pinned box point is found even with zero objective") {
  LPResult res = solve_lp_dense(imat({{1, 0}, {0, 1}}), ivec({2, -1}),
                                finite_bounds({-3, -3}), finite_bounds({3, 3}),
                                ivec({0, 0}));
  REQUIRE(res.status == LPResult::Status::Optimal);
  CHECK(res.x[0] == 2);
  CHECK(res.x[1] == -1);
}

TEST_CASE("the relaxation dominates the integer optimum on random instances") {
  GenSpec gs;
  gs.n = 2;
  gs.r = 1;
  gs.s = 1;
  gs.t = 2;
  gs.box = 3;
  int optimal_seen = 0;
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    Instance inst = generate_instance(gs, seed);
    LPResult lp = solve_lp(inst);
    OracleResult ip = brute_force_solve(inst);
    if (ip.status == OracleResult::Status::Optimal) {
      // a feasible integer point exists, so the relaxation cannot be
      // infeasible, and with a finite box it cannot be unbounded
      REQUIRE(lp.status == LPResult::Status::Optimal);
      CHECK(lp.value >= Rational(ip.value));
      ++optimal_seen;
    }
    if (lp.status == LPResult::Status::Optimal) {
      const IntMatrix m = assemble_matrix(inst);
      check_feasible(m, inst.rhs(), inst.lower(), inst.upper(), lp.x);
      CHECK(is_vertex(m, inst.lower(), inst.upper(), lp.x));
    }
  }
  CHECK(optimal_seen > 5);  // the generator seeds from a feasible point
}

TEST_CASE("solved vertices are exact rational feasible points") {
  Rng rng(77);
  for (int rep = 0; rep < 30; ++rep) {
    const Index rows = 1 + rng.uniform(0, 1);
    const Index cols = rows + 1 + rng.uniform(0, 2);
    IntMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-3, 3);
    IntVector rhs(rows);
    for (Index i = 0; i < rows; ++i) rhs[i] = rng.uniform(-4, 4);
    BoundVec lo, hi;
    IntVector c(cols);
    for (Index j = 0; j < cols; ++j) {
      const Int l = rng.uniform(-4, 0);
      lo.push_back(Bound::finite(l));
      hi.push_back(Bound::finite(l + rng.uniform(0, 6)));
      c[j] = rng.uniform(-3, 3);
    }
    LPResult res = solve_lp_dense(m, rhs, lo, hi, c);
    if (res.status != LPResult::Status::Optimal) continue;
    check_feasible(m, rhs, lo, hi, res.x);
    CHECK(is_vertex(m, lo, hi, res.x));
    // no feasible direction improves: exactness cross-check against a
    // denser scan of integer points within the box
    OracleResult ref = brute_force_solve_dense(
        m, rhs, lo, hi, LinearObjective{c}, BigInt(1000000));
    if (ref.status == OracleResult::Status::Optimal)
      CHECK(res.value >= Rational(ref.value));
  }
}
