// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foldip/driver.hpp"
#include "foldip/generate.hpp"
#include "foldip/oracle.hpp"
#include "helpers.hpp"

using namespace foldip;
using namespace foldip::testing;

namespace {

InstanceData spread_three() {
  // x1 + x2 = 3 linking; x1 = 1 and x2 = 2 pinned by the diagonal rows
  InstanceData d = uniform_blocks(2, imat({{1}}), imat({{1}}));
  d.rhs = ivec({3, 1, 2});
  d.lower = finite_bounds({0, 0});
  d.upper = finite_bounds({10, 10});
  d.objective = LinearObjective{ivec({1, 1})};
  return d;
}

}  // namespace

TEST_CASE("a fully determined system solves to its unique point") {
  SolveResult res = solve(Instance::validate(spread_three()));
  REQUIRE(res.status == SolveStatus::Optimal);
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->value == 3);
  CHECK(res.solution->x == ivec({1, 2}));
  CHECK(res.stats.iterations == 0);  // phase one already lands on the optimum
}

TEST_CASE("contradictory diagonal equations are infeasible") {
  InstanceData d = uniform_blocks(1, imat({{1}}), imat({{1}}));
  d.rhs = ivec({1, 2});
  d.lower = finite_bounds({0});
  d.upper = finite_bounds({5});
  d.objective = LinearObjective{ivec({1})};
  SolveResult res = solve(Instance::validate(std::move(d)));
  CHECK(res.status == SolveStatus::Infeasible);
  CHECK(!res.solution.has_value());
}

TEST_CASE("a free ray with positive cost is unbounded") {
  InstanceData d = uniform_blocks(1, imat({{0}}), imat({{0}}));
  d.rhs = ivec({0, 0});
  d.lower = finite_bounds({0});
  d.upper.push_back(Bound::pos_inf());
  d.objective = LinearObjective{ivec({1})};
  SolveResult res = solve(Instance::validate(std::move(d)));
  CHECK(res.status == SolveStatus::Unbounded);
  CHECK(res.stats.used_lp);
}

TEST_CASE("phase one finds a start and reports infeasibility honestly") {
  SUBCASE("zero right side admits the zero point immediately") {
    InstanceData d = uniform_blocks(2, imat({{1, -1}}), imat({{1, 1}}));
    d.rhs = IntVector::Zero(3);
    d.lower = uniform_bounds(4, -3);
    d.upper = uniform_bounds(4, 3);
    d.objective = LinearObjective{IntVector::Zero(4)};
    auto sol = phase_one(Instance::validate(std::move(d)));
    REQUIRE(sol.has_value());
    CHECK(sol->x == IntVector::Zero(4));
  }
  SUBCASE("constructed right sides are always reachable") {
    GenSpec gs;
    gs.n = 3;
    gs.r = 2;
    gs.s = 1;
    gs.t = 2;
    for (std::uint64_t seed = 20; seed < 35; ++seed) {
      Instance inst = generate_instance(gs, seed);
      auto sol = phase_one(inst);
      REQUIRE(sol.has_value());
      CHECK(within_bounds(inst, sol->x));
      CHECK(is_zero(residual(inst, sol->x)));
    }
  }
  SUBCASE("the contradictory example is infeasible") {
    InstanceData d = uniform_blocks(1, imat({{1}}), imat({{1}}));
    d.rhs = ivec({1, 2});
    d.lower = finite_bounds({0});
    d.upper = finite_bounds({5});
    d.objective = LinearObjective{ivec({1})};
    CHECK(!phase_one(Instance::validate(std::move(d))).has_value());
  }
}

TEST_CASE("phase one works when zero lies outside the box") {
  // both variables confined to [2, 5]; the anchor shift makes 0 reachable
  InstanceData d = uniform_blocks(1, imat({{1, 1}}), imat({{1, -1}}));
  d.rhs = ivec({7, -1});  // x = (3, 4)
  d.lower = finite_bounds({2, 2});
  d.upper = finite_bounds({5, 5});
  d.objective = LinearObjective{ivec({1, 1})};
  Instance inst = Instance::validate(std::move(d));
  auto sol = phase_one(inst);
  REQUIRE(sol.has_value());
  CHECK(within_bounds(inst, sol->x));
  CHECK(is_zero(residual(inst, sol->x)));
}

TEST_CASE("the convex path minimizes the spread example") {
  InstanceData d = uniform_blocks(1, imat({{1, 1}}), imat({{0, 0}}));
  d.rhs = ivec({4, 0});
  d.lower = finite_bounds({0, 0});
  d.upper = finite_bounds({4, 4});
  ConvexObjective obj;
  obj.terms.push_back(QuadraticTerm{1, -2, 1});    // (x-1)^2
  obj.terms.push_back(QuadraticTerm{1, -10, 25});  // (x-5)^2
  d.objective = std::move(obj);
  SolveResult res = solve_convex(Instance::validate(std::move(d)));
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.solution->value == 2);
  CHECK(res.solution->x == ivec({0, 4}));
}

TEST_CASE("an all-zero convex objective accepts any feasible point at cost 0") {
  InstanceData d = spread_three();
  ConvexObjective obj;
  obj.terms.push_back(LinearTerm{0});
  obj.terms.push_back(LinearTerm{0});
  d.objective = std::move(obj);
  SolveResult res = solve_convex(Instance::validate(std::move(d)));
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.solution->value == 0);
  CHECK(res.solution->x == ivec({1, 2}));
}

TEST_CASE("solve_convex rejects linear objectives") {
  CHECK_THROWS_AS(solve_convex(Instance::validate(spread_three())), Error);
}

TEST_CASE("a linear objective pushed through the convex path agrees") {
  GenSpec gs;
  gs.n = 2;
  gs.t = 2;
  gs.box = 3;
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    Instance lin = generate_instance(gs, seed);
    SolveResult direct = solve(lin);

    // minimizing sum(-c_j x_j) is maximizing c^T x
    InstanceData d = lin.data();
    ConvexObjective obj;
    const auto& c = std::get<LinearObjective>(lin.objective()).c;
    for (Index j = 0; j < c.size(); ++j) obj.terms.push_back(LinearTerm{-c[j]});
    d.objective = std::move(obj);
    SolveResult via_convex = solve_convex(Instance::validate(std::move(d)));

    REQUIRE(direct.status == via_convex.status);
    if (direct.status == SolveStatus::Optimal)
      CHECK(direct.solution->value == -via_convex.solution->value);
  }
}

TEST_CASE("random instances match the brute-force oracle") {
  GenSpec gs;
  gs.n = 3;
  gs.r = 1;
  gs.s = 1;
  gs.t = 2;
  gs.delta = 2;
  gs.box = 3;
  int optima = 0;
  for (std::uint64_t seed = 1000; seed < 1060; ++seed) {
    Instance inst = generate_instance(gs, seed);
    SolveResult mine = solve(inst);
    OracleResult ref = brute_force_solve(inst);
    if (ref.status == OracleResult::Status::Optimal) {
      REQUIRE(mine.status == SolveStatus::Optimal);
      CHECK(mine.solution->value == ref.value);
      ++optima;
    } else {
      CHECK(mine.status == SolveStatus::Infeasible);
    }
  }
  CHECK(optima >= 40);
}

TEST_CASE("infinite bounds are clamped through the relaxation") {
  // delta 1 keeps the proximity radius (and with it the DP state space)
  // small enough for a unit test; the acceptance run covers more ground
  GenSpec gs;
  gs.n = 2;
  gs.t = 1;
  gs.delta = 1;
  gs.box = 2;
  gs.inf_frac = 0.4;
  int solved = 0;
  for (std::uint64_t seed = 1100; seed < 1160; ++seed) {
    Instance inst = generate_instance(gs, seed);
    if (inst.has_finite_bounds()) continue;
    SolveResult mine = solve(inst);
    if (mine.status == SolveStatus::Unbounded) {
      CHECK(mine.stats.used_lp);
      continue;
    }
    // compare against enumeration over a box that safely contains the
    // clamp window: widen every infinite side far beyond the optimum
    InstanceData wide = inst.data();
    for (Index j = 0; j < inst.num_vars(); ++j) {
      if (!wide.lower[j].is_finite()) wide.lower[j] = Bound::finite(-12);
      if (!wide.upper[j].is_finite()) wide.upper[j] = Bound::finite(12);
    }
    OracleResult ref =
        brute_force_solve(Instance::validate(std::move(wide)), BigInt(1) << 22);
    if (mine.status == SolveStatus::Optimal) {
      REQUIRE(ref.status == OracleResult::Status::Optimal);
      CHECK(mine.solution->value >= ref.value);
      CHECK(within_bounds(inst, mine.solution->x));
      CHECK(is_zero(residual(inst, mine.solution->x)));
      ++solved;
    } else {
      CHECK(ref.status == OracleResult::Status::Infeasible);
    }
  }
  CHECK(solved >= 4);
}

TEST_CASE("stats account for the work done") {
  GenSpec gs;
  gs.n = 2;
  gs.t = 2;
  gs.cost_max = 4;
  for (std::uint64_t seed = 1200; seed < 1212; ++seed) {
    Instance inst = generate_instance(gs, seed);
    SolveResult res = solve(inst);
    if (res.status != SolveStatus::Optimal) continue;
    CHECK(res.stats.iterations <= res.stats.iteration_cap);
    CHECK(res.stats.phi == compute_phi(inst));
    BigInt histogram_total = 0;
    for (const auto& [exp, count] : res.stats.lambda_histogram)
      histogram_total += count;
    CHECK(histogram_total == res.stats.iterations + res.stats.phase_one_iterations);
    CHECK(res.stats.dp_calls >= res.stats.iterations);
    CHECK(res.stats.seconds_total >= 0);
  }
}

TEST_CASE("iteration caps stop runaway loops when asked") {
  GenSpec gs;
  gs.n = 3;
  gs.t = 2;
  gs.box = 4;
  for (std::uint64_t seed = 1300; seed < 1320; ++seed) {
    Instance inst = generate_instance(gs, seed);
    SolveOptions opts;
    opts.max_iterations = BigInt(0);
    try {
      SolveResult res = solve(inst, opts);
      // zero-iteration success means phase one's point was already optimal
      if (res.status == SolveStatus::Optimal)
        CHECK(res.stats.iterations == 0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IterationLimit);
    }
  }
}
