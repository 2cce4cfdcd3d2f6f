// SPDX-License-Identifier: Apache-2.0
#include "foldip/graver_bounds.hpp"

namespace foldip {

BigInt compute_LB(Index s, Int delta) {
  require(s >= 0 && delta >= 0, ErrorCode::InternalError, "bad bound inputs");
  BigInt base = 2 * BigInt(s) * delta + 1;
  return big_pow(base, static_cast<unsigned>(s));
}

BigInt compute_LA(Index r, Index s, Int delta) {
  require(r >= 0, ErrorCode::InternalError, "bad bound inputs");
  BigInt lb = compute_LB(s, delta);
  BigInt base = 2 * BigInt(r) * delta * lb + 1;
  return lb * big_pow(base, static_cast<unsigned>(r));
}

BigInt compute_Ltau(const std::vector<Index>& layer_maxima, Int delta) {
  require(!layer_maxima.empty() && delta >= 0, ErrorCode::InternalError,
          "bad bound inputs");
  BigInt s = 1;
  for (Index m : layer_maxima) {
    require(m >= 1, ErrorCode::InternalError, "layer row count must be >= 1");
    s *= BigInt(m) + 1;
  }
  require(s - 1 <= std::numeric_limits<unsigned>::max(), ErrorCode::CapTooLarge,
          "tree bound exponent too large to evaluate");
  BigInt bound = big_pow(3 * s * delta, s.convert_to<unsigned>() - 1);
  return bound < 1 ? BigInt(1) : bound;
}

std::optional<BigInt> compute_gamma(const BoundVec& lower, const BoundVec& upper) {
  BigInt best = 0;
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!lower[j].is_finite() || !upper[j].is_finite()) return std::nullopt;
    BigInt w = BigInt(upper[j].value()) - lower[j].value();
    if (w > best) best = w;
  }
  return best;
}

BigInt effective_norm_bound(const Instance& inst, const BigInt& L_A) {
  require(inst.has_finite_bounds(), ErrorCode::InfiniteBoundsUnsupported,
          "effective norm bound needs a finite box");
  BigInt total = 0;
  for (Index j = 0; j < inst.num_vars(); ++j) {
    total += BigInt(inst.upper()[j].value()) - inst.lower()[j].value();
    if (total >= L_A) return L_A;
  }
  return total;
}

BoundsReport compute_bounds_report(const Instance& inst) {
  BoundsReport rep;
  rep.n = inst.n();
  rep.r = inst.r();
  rep.s = inst.s();
  rep.t = inst.t();
  rep.delta = inst.delta();
  rep.L_B = compute_LB(inst.s(), inst.delta());
  rep.L_A = compute_LA(inst.r(), inst.s(), inst.delta());
  rep.gamma = compute_gamma(inst.lower(), inst.upper());
  rep.effective = inst.has_finite_bounds()
                      ? effective_norm_bound(inst, rep.L_A)
                      : rep.L_A;
  return rep;
}

}  // namespace foldip
