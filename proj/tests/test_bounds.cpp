// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foldip/driver.hpp"
#include "foldip/graver_bounds.hpp"
#include "helpers.hpp"

using namespace foldip;
using namespace foldip::testing;

TEST_CASE("single-block norm bound") {
  CHECK(compute_LB(1, 1) == 3);      // (2*1*1+1)^1
  CHECK(compute_LB(2, 2) == 81);     // (2*2*2+1)^2
  CHECK(compute_LB(1, 0) == 1);      // zero matrix still admits unit steps
  CHECK(compute_LB(3, 1) == 343);    // 7^3
}

TEST_CASE("full-matrix norm bound") {
  // L_B = 3, then 3 * (2*1*1*3 + 1)^1 = 21
  CHECK(compute_LA(1, 1, 1) == 21);
  CHECK(compute_LA(1, 1, 0) == 1);
  // r = 2, s = 1, delta = 1: L_B = 3, 3 * (2*2*1*3 + 1)^2 = 3 * 169
  CHECK(compute_LA(2, 1, 1) == 507);
}

TEST_CASE("norm bounds grow monotonically in every parameter") {
  BigInt prev = 0;
  for (Int delta = 0; delta <= 4; ++delta) {
    BigInt cur = compute_LA(1, 1, delta);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK(compute_LA(2, 1, 2) >= compute_LA(1, 1, 2));
  CHECK(compute_LA(1, 2, 2) >= compute_LA(1, 1, 2));
  CHECK(compute_LB(2, 3) >= compute_LB(2, 2));
}

TEST_CASE("tree layer norm bound") {
  // one layer of single-row blocks: S = 2, (3*2*1)^(2-1) = 6
  CHECK(compute_Ltau({1}, 1) == 6);
  // two layers: S = 4, (3*4*1)^3 = 1728
  CHECK(compute_Ltau({1, 1}, 1) == 1728);
  // zero matrix: clamped to 1
  CHECK(compute_Ltau({1}, 0) == 1);
  CHECK(compute_Ltau({2, 1}, 2) == big_pow(BigInt(36), 5));
}

TEST_CASE("gamma is the largest box width") {
  BoundVec lo = finite_bounds({0, -3, 2});
  BoundVec hi = finite_bounds({5, 4, 2});
  auto g = compute_gamma(lo, hi);
  REQUIRE(g.has_value());
  CHECK(*g == 7);

  hi[1] = Bound::pos_inf();
  CHECK(!compute_gamma(lo, hi).has_value());
}

TEST_CASE("effective norm bound caps L_A by the box volume") {
  // two 0/1 variables: widths sum to 2, far below L_A = 21
  InstanceData d = uniform_blocks(1, imat({{1, 1}}), imat({{1, 0}}));
  d.rhs = ivec({0, 0});
  d.lower = finite_bounds({0, 0});
  d.upper = finite_bounds({1, 1});
  d.objective = LinearObjective{ivec({0, 0})};
  Instance inst = Instance::validate(std::move(d));
  CHECK(effective_norm_bound(inst, compute_LA(1, 1, 1)) == 2);

  // wide box: L_A itself is the cap
  InstanceData w = uniform_blocks(1, imat({{1, 1}}), imat({{1, 0}}));
  w.rhs = ivec({0, 0});
  w.lower = finite_bounds({-100, -100});
  w.upper = finite_bounds({100, 100});
  w.objective = LinearObjective{ivec({0, 0})};
  Instance wide = Instance::validate(std::move(w));
  CHECK(effective_norm_bound(wide, compute_LA(1, 1, 1)) == 21);
}

TEST_CASE("bounds report collects the pieces") {
  InstanceData d = uniform_blocks(2, imat({{1, -1}}), imat({{1, 1}}));
  d.rhs = ivec({0, 0, 0});
  d.lower = uniform_bounds(4, -2);
  d.upper = uniform_bounds(4, 3);
  d.objective = LinearObjective{IntVector::Zero(4)};
  Instance inst = Instance::validate(std::move(d));
  BoundsReport rep = compute_bounds_report(inst);
  CHECK(rep.n == 2);
  CHECK(rep.delta == 1);
  CHECK(rep.L_B == 3);
  CHECK(rep.L_A == 21);
  REQUIRE(rep.gamma.has_value());
  CHECK(*rep.gamma == 5);
  CHECK(rep.effective == std::min<BigInt>(BigInt(21), BigInt(4 * 5)));
}

TEST_CASE("phi is the bit length of the largest instance number") {
  InstanceData d = uniform_blocks(1, imat({{1, 1}}), imat({{1, 0}}));
  d.rhs = ivec({9, 0});
  d.lower = finite_bounds({0, 0});
  d.upper = finite_bounds({2, 2});
  d.objective = LinearObjective{ivec({1, 1})};
  Instance inst = Instance::validate(std::move(d));
  CHECK(compute_phi(inst) == 4);  // 9 needs four bits

  InstanceData big = uniform_blocks(1, imat({{1, 1}}), imat({{1, 0}}));
  big.rhs = ivec({0, 0});
  big.lower = finite_bounds({-1024, 0});
  big.upper = finite_bounds({2, 2});
  big.objective = LinearObjective{ivec({1, 1})};
  CHECK(compute_phi(Instance::validate(std::move(big))) == 11);
}

TEST_CASE("proximity clamp keeps the box inside the predicted window") {
  InstanceData d = uniform_blocks(2, imat({{1, 1}}), imat({{1, -1}}));
  d.rhs = ivec({0, 0, 0});
  d.lower = uniform_bounds(4, -1000000);
  d.upper = uniform_bounds(4, 1000000);
  d.objective = LinearObjective{ivec({1, 1, 1, 1})};
  Instance inst = Instance::validate(std::move(d));

  RationalVector x_star(4);
  x_star << Rational(1, 2), Rational(-3, 2), Rational(7), Rational(0);
  Instance clamped = clamp_by_proximity(inst, x_star);

  const BigInt radius = BigInt(inst.num_vars()) * compute_LA(1, 1, 1);
  for (Index j = 0; j < 4; ++j) {
    REQUIRE(clamped.lower()[j].is_finite());
    REQUIRE(clamped.upper()[j].is_finite());
    const BigInt lo = clamped.lower()[j].value();
    const BigInt hi = clamped.upper()[j].value();
    CHECK(lo >= ceil_rational(x_star[j]) - radius);
    CHECK(hi <= floor_rational(x_star[j]) + radius);
    CHECK(lo >= -1000000);
    CHECK(hi <= 1000000);
    // width after clamping never exceeds the proximity window
    CHECK(hi - lo <= 2 * radius + 1);
  }
}
