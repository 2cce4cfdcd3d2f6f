// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>

#include "foldip/augment_dp.hpp"
#include "foldip/generate.hpp"
#include "foldip/graver_bounds.hpp"
#include "foldip/oracle.hpp"
#include "foldip/rng.hpp"
#include "helpers.hpp"

using namespace foldip;
using namespace foldip::testing;

namespace {

// Exhaustive reference: the best gain over kernel vectors y of the assembled
// matrix with the DP's own windows and 1-norm at most norm_cap, where gain
// is the linear objective moved by lambda * y.
std::optional<BigInt> best_kernel_gain(const Instance& inst, const IntVector& z,
                                       const BigInt& lambda,
                                       const BigInt& norm_cap) {
  const IntMatrix m = assemble_matrix(inst);
  const auto windows = clamp_bounds(inst, z, lambda, norm_cap);
  const auto& c = std::get<LinearObjective>(inst.objective()).c;
  std::optional<BigInt> best;
  for (const IntVector& y : enumerate_kernel(m, norm_cap)) {
    bool inside = true;
    for (Index j = 0; j < y.size() && inside; ++j)
      inside = BigInt(y[j]) >= windows[j].lo && BigInt(y[j]) <= windows[j].hi;
    if (!inside) continue;
    BigInt gain = 0;
    for (Index j = 0; j < y.size(); ++j)
      if (c[j] != 0) gain += BigInt(c[j]) * y[j];
    gain *= lambda;
    if (!best || gain > *best) best = gain;
  }
  return best;
}

Instance paired_ones(Int lo, Int hi, Int c1, Int c2) {
  InstanceData d = uniform_blocks(1, imat({{1, 1}}), imat({{1, 1}}));
  d.rhs = ivec({0, 0});
  d.lower = finite_bounds({lo, lo});
  d.upper = finite_bounds({hi, hi});
  d.objective = LinearObjective{ivec({c1, c2})};
  return Instance::validate(std::move(d));
}

// The feasible point with the worst objective, so augmentation has room to
// improve; nullopt when the instance is infeasible.
std::optional<IntVector> worst_feasible(const Instance& inst) {
  InstanceData flipped = inst.data();
  IntVector c = std::get<LinearObjective>(inst.objective()).c;
  for (Index j = 0; j < c.size(); ++j) c[j] = -c[j];
  flipped.objective = LinearObjective{std::move(c)};
  OracleResult res = brute_force_solve(Instance::validate(std::move(flipped)));
  if (res.status != OracleResult::Status::Optimal) return std::nullopt;
  return res.x;
}

}  // namespace

TEST_CASE("multiplicity windows divide and clamp correctly") {
  InstanceData d = uniform_blocks(1, imat({{1}}), imat({{0}}));
  d.rhs = ivec({0, 0});
  d.lower = finite_bounds({0});
  d.upper = finite_bounds({10});
  d.objective = LinearObjective{ivec({1})};
  Instance inst = Instance::validate(std::move(d));

  // l=0, u=10, z=3, lambda=2: ceil(-3/2) = -1, floor(7/2) = 3
  auto w = clamp_bounds(inst, ivec({3}), BigInt(2), BigInt(100));
  REQUIRE(w.size() == 1);
  CHECK(w[0].lo == -1);
  CHECK(w[0].hi == 3);

  // the cap takes over when the box allows more
  auto tight = clamp_bounds(inst, ivec({3}), BigInt(1), BigInt(2));
  CHECK(tight[0].lo == -2);
  CHECK(tight[0].hi == 2);
}

TEST_CASE("a frozen variable yields the zero window") {
  InstanceData d = uniform_blocks(1, imat({{1}}), imat({{0}}));
  d.rhs = ivec({5, 0});
  d.lower = finite_bounds({5});
  d.upper = finite_bounds({5});
  d.objective = LinearObjective{ivec({1})};
  Instance inst = Instance::validate(std::move(d));
  auto w = clamp_bounds(inst, ivec({5}), BigInt(1), BigInt(10));
  CHECK(w[0].lo == 0);
  CHECK(w[0].hi == 0);
}

TEST_CASE("a trivial kernel admits no augmenting step") {
  // two bricks of one variable each, A = B = [1]: full-rank square system
  InstanceData d = uniform_blocks(2, imat({{1}}), imat({{1}}));
  d.rhs = ivec({3, 1, 2});
  d.lower = finite_bounds({0, 0});
  d.upper = finite_bounds({10, 10});
  d.objective = LinearObjective{ivec({1, 1})};
  Instance inst = Instance::validate(std::move(d));
  for (Int lam : {1, 2, 4})
    CHECK(!solve_augmentation(inst, ivec({1, 2}), BigInt(lam), BigInt(50)));
}

TEST_CASE("the frozen two-variable example gains exactly 2") {
  Instance inst = paired_ones(-1, 1, 1, -1);
  auto step = solve_augmentation(inst, ivec({0, 0}), BigInt(1), BigInt(50));
  REQUIRE(step.has_value());
  CHECK(step->gain == 2);
  REQUIRE(step->y.size() == 2);
  CHECK(step->y[0] == 1);
  CHECK(step->y[1] == -1);
  CHECK(step->lambda == 1);
}

TEST_CASE("no positive direction means no step") {
  // same kernel, but the objective already points the wrong way
  Instance inst = paired_ones(-1, 1, 1, 1);  // c = (1,1): kernel moves cancel
  CHECK(!solve_augmentation(inst, ivec({0, 0}), BigInt(1), BigInt(50)));
}

TEST_CASE("steps respect the window even when better unbounded moves exist") {
  // z at the upper bound in coordinate 0: only the negative direction fits
  Instance inst = paired_ones(-1, 1, 1, -1);
  auto step = solve_augmentation(inst, ivec({1, -1}), BigInt(1), BigInt(50));
  CHECK(!step.has_value());  // already optimal in the box
}

TEST_CASE("the output is a kernel vector and the move stays feasible") {
  GenSpec gs;
  gs.n = 2;
  gs.r = 1;
  gs.s = 1;
  gs.t = 2;
  gs.delta = 2;
  gs.box = 3;
  int steps_seen = 0;
  for (std::uint64_t seed = 400; seed < 460; ++seed) {
    Instance inst = generate_instance(gs, seed);
    auto start = worst_feasible(inst);
    if (!start) continue;
    const IntVector z = *start;
    const BigInt cap = effective_norm_bound(inst, compute_LA(1, 1, 2));
    for (Int lam : {1, 2}) {
      auto step = solve_augmentation(inst, z, BigInt(lam), cap);
      if (!step) continue;
      ++steps_seen;
      CHECK(step->gain > 0);
      // kernel: assembled matrix times y is zero
      const IntMatrix m = assemble_matrix(inst);
      for (Index i = 0; i < m.rows(); ++i) {
        BigInt acc = 0;
        for (Index j = 0; j < m.cols(); ++j)
          if (m(i, j) != 0) acc += BigInt(m(i, j)) * step->y[j];
        CHECK(acc == 0);
      }
      // feasibility of the move
      for (Index j = 0; j < inst.num_vars(); ++j) {
        const BigInt moved = BigInt(z[j]) + BigInt(lam) * step->y[j];
        CHECK(inst.in_bounds(j, moved));
      }
    }
  }
  CHECK(steps_seen >= 10);  // starting from the worst point leaves headroom
}

TEST_CASE("dominance: the DP gain is at least the exhaustive in-cap maximum") {
  GenSpec gs;
  gs.n = 2;
  gs.r = 1;
  gs.s = 1;
  gs.t = 2;
  gs.delta = 1;
  gs.box = 2;
  int compared = 0;
  for (std::uint64_t seed = 500; seed < 540; ++seed) {
    Instance inst = generate_instance(gs, seed);
    auto worst = worst_feasible(inst);
    if (!worst) continue;
    const IntVector z = *worst;
    const BigInt cap = 4;
    for (Int lam : {1, 2}) {
      auto ref = best_kernel_gain(inst, z, BigInt(lam), cap);
      auto step = solve_augmentation(inst, z, BigInt(lam), cap);
      const BigInt got = step ? step->gain : BigInt(0);
      if (ref) CHECK(got >= *ref);
      if (!step) CHECK((!ref || *ref <= 0));
      ++compared;
    }
  }
  CHECK(compared >= 20);
}

TEST_CASE("equal results under the effective bound and the raw norm bound") {
  GenSpec gs;
  gs.n = 2;
  gs.t = 2;
  gs.delta = 1;
  gs.box = 2;
  for (std::uint64_t seed = 600; seed < 615; ++seed) {
    Instance inst = generate_instance(gs, seed);
    auto worst = worst_feasible(inst);
    if (!worst) continue;
    const BigInt raw = compute_LA(1, 1, inst.delta());
    const BigInt eff = effective_norm_bound(inst, raw);
    auto a = solve_augmentation(inst, *worst, BigInt(1), eff);
    auto b = solve_augmentation(inst, *worst, BigInt(1), raw);
    CHECK(a.has_value() == b.has_value());
    if (a && b) CHECK(a->gain == b->gain);
  }
}

TEST_CASE("identical inputs give identical steps") {
  GenSpec gs;
  gs.n = 3;
  gs.t = 2;
  for (std::uint64_t seed = 700; seed < 706; ++seed) {
    Instance inst = generate_instance(gs, seed);
    auto worst = worst_feasible(inst);
    if (!worst) continue;
    auto a = solve_augmentation(inst, *worst, BigInt(1), BigInt(6));
    auto b = solve_augmentation(inst, *worst, BigInt(1), BigInt(6));
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(a->gain == b->gain);
      REQUIRE(a->y.size() == b->y.size());
      for (Index j = 0; j < a->y.size(); ++j) CHECK(a->y[j] == b->y[j]);
    }
  }
}
