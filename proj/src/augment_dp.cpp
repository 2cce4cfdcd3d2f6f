// SPDX-License-Identifier: Apache-2.0
#include "foldip/augment_dp.hpp"

#include <unordered_map>

#include <boost/functional/hash.hpp>

namespace foldip {

namespace {

constexpr Int kFastMagnitude = Int(1) << 61;

template <class SI>
struct VecHash {
  std::size_t operator()(const std::vector<SI>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const SI& x : v) {
      std::size_t hx;
      if constexpr (std::is_same_v<SI, Int>)
        hx = std::hash<Int>{}(x);
      else
        hx = boost::hash<BigInt>{}(x);
      h ^= hx + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// One layer of the search graph, stored flat for reconstruction.
template <class SI, class WI>
struct Layer {
  Index dim = 0;
  std::vector<SI> keys;  // dim entries per node
  std::vector<WI> weight;
  std::vector<std::int64_t> pred;
  std::vector<SI> mult;

  Index size() const { return dim == 0 ? 0 : static_cast<Index>(weight.size()); }
};

template <class SI, class WI, class WeightFn>
std::optional<AugmentingStep> dp_run(const Instance& inst,
                                     const std::vector<MultWindow>& windows,
                                     const SI& state_cap, WeightFn&& col_weight,
                                     const BigInt& lambda) {
  const Index r = inst.r(), s = inst.s(), t = inst.t(), n = inst.n();
  const Index dim = r + s;
  const Index cols = n * t;

  std::vector<Layer<SI, WI>> layers(cols + 1);
  layers[0].dim = dim;
  layers[0].keys.assign(dim, SI(0));
  layers[0].weight.assign(1, WI(0));
  layers[0].pred.assign(1, -1);
  layers[0].mult.assign(1, SI(0));

  std::vector<SI> child(dim);
  for (Index g = 0; g < cols; ++g) {
    const Index block = g / t;
    const Index q = g % t;
    const bool block_end = (q == t - 1);
    const bool final_col = (g == cols - 1);
    const IntMatrix& top = inst.top_block(block);
    const IntMatrix& diag = inst.diag_block(block);

    SI wlo, whi;
    if constexpr (std::is_same_v<SI, Int>) {
      wlo = to_int64(windows[g].lo);
      whi = to_int64(windows[g].hi);
    } else {
      wlo = windows[g].lo;
      whi = windows[g].hi;
    }

    Layer<SI, WI>& prev = layers[g];
    Layer<SI, WI>& next = layers[g + 1];
    next.dim = dim;
    std::unordered_map<std::vector<SI>, Index, VecHash<SI>> seen;

    for (Index p = 0; p < prev.size(); ++p) {
      const SI* pkey = prev.keys.data() + p * dim;
      for (SI m = wlo; m <= whi; ++m) {
        bool ok = true;
        for (Index i = 0; i < r && ok; ++i) {
          child[i] = pkey[i] + m * SI(top(i, q));
          if (child[i] > state_cap || -child[i] > state_cap) ok = false;
        }
        for (Index i = 0; i < s && ok; ++i) {
          child[r + i] = pkey[r + i] + m * SI(diag(i, q));
          if (child[r + i] > state_cap || -child[r + i] > state_cap) ok = false;
        }
        if (!ok) continue;
        if (block_end) {
          for (Index i = 0; i < s && ok; ++i)
            if (child[r + i] != 0) ok = false;
        }
        if (final_col) {
          for (Index i = 0; i < r && ok; ++i)
            if (child[i] != 0) ok = false;
        }
        if (!ok) continue;

        WI w = prev.weight[p] + col_weight(g, m);
        auto [it, inserted] = seen.try_emplace(child, next.size());
        if (inserted) {
          next.keys.insert(next.keys.end(), child.begin(), child.end());
          next.weight.push_back(w);
          next.pred.push_back(p);
          next.mult.push_back(m);
        } else {
          Index idx = it->second;
          if (w > next.weight[idx] ||
              (w == next.weight[idx] && m < next.mult[idx])) {
            next.weight[idx] = w;
            next.pred[idx] = p;
            next.mult[idx] = m;
          }
        }
      }
    }
    require(next.size() > 0, ErrorCode::InternalError,
            "zero path lost in augmentation search");
  }

  const Layer<SI, WI>& last = layers[cols];
  require(last.size() == 1, ErrorCode::InternalError,
          "final layer must hold exactly the zero state");
  if (!(last.weight[0] > WI(0))) return std::nullopt;

  AugmentingStep step;
  step.lambda = lambda;
  step.gain = BigInt(last.weight[0]);
  step.y.resize(cols);
  Index idx = 0;
  for (Index g = cols; g >= 1; --g) {
    step.y[g - 1] = BigInt(layers[g].mult[idx]);
    idx = static_cast<Index>(layers[g].pred[idx]);
  }
  return step;
}

struct LinearWeights {
  const IntVector* c;
  BigInt lambda;
  template <class SI>
  BigInt operator()(Index g, const SI& m) const {
    return lambda * (*c)[g] * BigInt(m);
  }
};

struct LinearWeightsFast {
  const IntVector* c;
  Int lambda;
  Int operator()(Index g, Int m) const { return lambda * (*c)[g] * m; }
};

struct ConvexWeights {
  const ConvexObjective* obj;
  const IntVector* z;
  BigInt lambda;
  template <class SI>
  BigInt operator()(Index g, const SI& m) const {
    return -incremental_cost(obj->terms[g], (*z)[g], lambda, BigInt(m));
  }
};

}  // namespace

std::vector<MultWindow> clamp_bounds(const Instance& inst, const IntVector& z,
                                     const BigInt& lambda,
                                     const BigInt& norm_cap) {
  require(lambda >= 1, ErrorCode::InternalError, "step length must be positive");
  require(norm_cap >= 0, ErrorCode::InternalError, "negative norm cap");
  std::vector<MultWindow> out(inst.num_vars());
  for (Index j = 0; j < inst.num_vars(); ++j) {
    BigInt lo = -norm_cap, hi = norm_cap;
    if (inst.lower()[j].is_finite()) {
      BigInt d = ceil_div(BigInt(inst.lower()[j].value()) - z[j], lambda);
      if (d > lo) lo = d;
    }
    if (inst.upper()[j].is_finite()) {
      BigInt d = floor_div(BigInt(inst.upper()[j].value()) - z[j], lambda);
      if (d < hi) hi = d;
    }
    require(lo <= 0 && hi >= 0, ErrorCode::InternalError,
            "point outside bounds while clamping");
    out[j] = MultWindow{lo, hi};
  }
  return out;
}

std::optional<AugmentingStep> solve_augmentation(const Instance& inst,
                                                 const IntVector& z,
                                                 const BigInt& lambda,
                                                 const BigInt& norm_cap) {
  std::vector<MultWindow> windows = clamp_bounds(inst, z, lambda, norm_cap);
  const BigInt radius = BigInt(inst.delta()) * norm_cap;
  const bool small_states = norm_cap <= kFastMagnitude && radius <= kFastMagnitude;

  std::optional<AugmentingStep> step;
  if (const auto* lin = std::get_if<LinearObjective>(&inst.objective())) {
    if (small_states) {
      BigInt worst = BigInt(inst.num_vars()) * lambda * max_abs_coeff(*lin) *
                     norm_cap;
      if (worst <= kFastMagnitude && fits_int64(lambda)) {
        step = dp_run<Int, Int>(inst, windows, to_int64(radius),
                                LinearWeightsFast{&lin->c, to_int64(lambda)},
                                lambda);
      } else {
        step = dp_run<Int, BigInt>(inst, windows, to_int64(radius),
                                   LinearWeights{&lin->c, lambda}, lambda);
      }
    } else {
      step = dp_run<BigInt, BigInt>(inst, windows, radius,
                                    LinearWeights{&lin->c, lambda}, lambda);
    }
  } else {
    const auto& cvx = std::get<ConvexObjective>(inst.objective());
    if (small_states) {
      step = dp_run<Int, BigInt>(inst, windows, to_int64(radius),
                                 ConvexWeights{&cvx, &z, lambda}, lambda);
    } else {
      step = dp_run<BigInt, BigInt>(inst, windows, radius,
                                    ConvexWeights{&cvx, &z, lambda}, lambda);
    }
  }
  if (!step) return step;

  // Always-on guards: the direction must be a kernel vector with kernel
  // bricks, and the move must stay inside the box.
  const Index t = inst.t();
  for (Index i = 0; i < inst.n(); ++i) {
    const IntMatrix& diag = inst.diag_block(i);
    for (Index p = 0; p < inst.s(); ++p) {
      BigInt acc = 0;
      for (Index q = 0; q < t; ++q)
        acc += BigInt(diag(p, q)) * step->y[i * t + q];
      require(acc == 0, ErrorCode::InternalError, "step brick leaves block kernel");
    }
  }
  for (Index p = 0; p < inst.r(); ++p) {
    BigInt acc = 0;
    for (Index i = 0; i < inst.n(); ++i)
      for (Index q = 0; q < t; ++q)
        acc += BigInt(inst.top_block(i)(p, q)) * step->y[i * t + q];
    require(acc == 0, ErrorCode::InternalError, "step leaves matrix kernel");
  }
  for (Index j = 0; j < inst.num_vars(); ++j)
    require(inst.in_bounds(j, BigInt(z[j]) + lambda * step->y[j]),
            ErrorCode::InternalError, "step leaves the box");
  return step;
}

}  // namespace foldip
