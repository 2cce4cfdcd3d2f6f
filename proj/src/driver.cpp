// SPDX-License-Identifier: Apache-2.0
#include "foldip/driver.hpp"

#include <chrono>
#include <future>

#include "foldip/objective.hpp"

namespace foldip {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Largest step count consistent with halving the optimality gap: steps - 1
// <= 4*n*t*log2(X), checked exactly as 2^(steps-1) <= X^(4nt).
BigInt steps_cap(const BigInt& X, Index num_vars) {
  if (X <= 1) return 1;
  BigInt power = big_pow(X, static_cast<unsigned>(4 * num_vars));
  return BigInt(boost::multiprecision::msb(power)) + 1;
}

// Componentwise projection of the origin onto the box.
IntVector projection_point(const Instance& inst) {
  IntVector x(inst.num_vars());
  for (Index j = 0; j < inst.num_vars(); ++j) {
    Int v = 0;
    if (inst.lower()[j].is_finite() && inst.lower()[j].value() > 0)
      v = inst.lower()[j].value();
    else if (inst.upper()[j].is_finite() && inst.upper()[j].value() < 0)
      v = inst.upper()[j].value();
    x[j] = v;
  }
  return x;
}

// Always-feasible companion problem whose optimum is zero exactly when the
// original is feasible.  Each block gets t real columns plus r + s slack
// slots; slack column k carries the matching shifted rhs entry on its
// diagonal, so setting the active slacks to one satisfies every row at the
// shifted origin.  Only the first block's top-row slacks are active, the
// other blocks keep those slots frozen at zero to preserve the uniform
// block shape.
struct AuxProblem {
  Instance inst;
  IntVector start;
  IntVector anchor;  // x = x_aux(real part) + anchor
  Index real_t;
};

AuxProblem build_phase_one_aux(const Instance& inst) {
  const Index n = inst.n(), r = inst.r(), s = inst.s(), t = inst.t();
  const Index t_aux = t + r + s;

  IntVector anchor = projection_point(inst);
  BigVector shifted = residual(inst, anchor);
  IntVector rhs_aux(inst.num_rows());
  for (Index i = 0; i < inst.num_rows(); ++i) {
    require(shifted[i] >= -kMaxEntryMagnitude && shifted[i] <= kMaxEntryMagnitude,
            ErrorCode::EntryTooLarge, "shifted rhs exceeds the entry range");
    rhs_aux[i] = to_int64(shifted[i]);
  }

  InstanceData d;
  d.n = n;
  d.r = r;
  d.s = s;
  d.t = t_aux;
  d.rhs = rhs_aux;
  IntVector costs = IntVector::Zero(n * t_aux);

  for (Index i = 0; i < n; ++i) {
    IntMatrix a = IntMatrix::Zero(r, t_aux);
    IntMatrix b = IntMatrix::Zero(s, t_aux);
    a.block(0, 0, r, t) = inst.top_block(i);
    b.block(0, 0, s, t) = inst.diag_block(i);
    if (i == 0)
      for (Index p = 0; p < r; ++p) a(p, t + p) = rhs_aux[p];
    for (Index p = 0; p < s; ++p) b(p, t + r + p) = rhs_aux[r + i * s + p];
    d.top_blocks.push_back(std::move(a));
    d.diag_blocks.push_back(std::move(b));
  }

  d.lower.reserve(n * t_aux);
  d.upper.reserve(n * t_aux);
  IntVector start = IntVector::Zero(n * t_aux);
  for (Index i = 0; i < n; ++i) {
    for (Index q = 0; q < t; ++q) {
      const Index j = i * t + q;
      const Bound& lo = inst.lower()[j];
      const Bound& hi = inst.upper()[j];
      d.lower.push_back(lo.is_finite() ? Bound::finite(lo.value() - anchor[j])
                                       : lo);
      d.upper.push_back(hi.is_finite() ? Bound::finite(hi.value() - anchor[j])
                                       : hi);
    }
    for (Index p = 0; p < r; ++p) {
      const bool active = (i == 0);
      d.lower.push_back(Bound::finite(0));
      d.upper.push_back(Bound::finite(active ? 1 : 0));
      if (active) {
        costs[i * t_aux + t + p] = -1;
        start[i * t_aux + t + p] = 1;
      }
    }
    for (Index p = 0; p < s; ++p) {
      d.lower.push_back(Bound::finite(0));
      d.upper.push_back(Bound::finite(1));
      costs[i * t_aux + t + r + p] = -1;
      start[i * t_aux + t + r + p] = 1;
    }
  }
  d.objective = LinearObjective{costs};

  AuxProblem aux{Instance::validate(std::move(d)), std::move(start),
                 std::move(anchor), t};
  require(is_zero(residual(aux.inst, aux.start)), ErrorCode::InternalError,
          "auxiliary start point infeasible");
  return aux;
}

struct LoopResult {
  IntVector z;
  BigInt value;
};

// Sweeps all step lengths, applies the best accepted move, repeats until no
// direction improves (or `stop_value` is hit).  The step-count cap is a
// hard runtime assertion.
LoopResult run_augment_loop(const Instance& work, IntVector z,
                            const SolveOptions& opts, SolveStats& stats,
                            bool main_loop,
                            const std::optional<BigInt>& stop_value) {
  require(work.has_finite_bounds(), ErrorCode::InternalError,
          "augmentation loop needs finite bounds");
  const Index nv = work.num_vars();
  const BigInt L_A = compute_LA(work.r(), work.s(), work.delta());
  const BigInt E = effective_norm_bound(work, L_A);
  const BigInt gamma = *compute_gamma(work.lower(), work.upper());

  unsigned max_exp = ceil_log2(gamma) + 1;
  if (opts.lambda_max_exp)
    max_exp = static_cast<unsigned>(std::max(0, *opts.lambda_max_exp));
  const unsigned num_candidates = max_exp + 1;

  BigInt X;
  const bool maximize = is_linear(work.objective());
  if (const auto* lin = std::get_if<LinearObjective>(&work.objective())) {
    X = BigInt(nv) * gamma * max_abs_coeff(*lin);
  } else {
    const auto& cvx = std::get<ConvexObjective>(work.objective());
    X = 0;
    for (Index j = 0; j < nv; ++j) {
      BigInt lo = work.lower()[j].value(), hi = work.upper()[j].value();
      X += term_max_on(cvx.terms[j], lo, hi) - term_min_on(cvx.terms[j], lo, hi);
    }
  }
  const BigInt cap = steps_cap(X, nv);
  if (main_loop) stats.iteration_cap = cap;

  BigInt value = objective_value(work, z);
  BigInt accepted = 0;

  std::vector<std::optional<AugmentingStep>> results(num_candidates);
  for (;;) {
    if (stop_value && value == *stop_value) break;

    auto sweep = [&](unsigned first, unsigned stride) {
      for (unsigned i = first; i < num_candidates; i += stride)
        results[i] = solve_augmentation(work, z, BigInt(1) << i, E);
    };
    const unsigned workers = static_cast<unsigned>(std::max(1, opts.threads));
    if (workers > 1 && num_candidates > 1) {
      std::vector<std::future<void>> futs;
      const unsigned k = std::min(workers, num_candidates);
      for (unsigned w = 1; w < k; ++w)
        futs.push_back(std::async(std::launch::async, sweep, w, k));
      sweep(0, k);
      for (auto& f : futs) f.get();
    } else {
      sweep(0, 1);
    }
    stats.dp_calls += num_candidates;

    int best = -1;
    for (unsigned i = 0; i < num_candidates; ++i)
      if (results[i] && (best < 0 || results[i]->gain > results[best]->gain))
        best = static_cast<int>(i);
    if (best < 0) break;
    const AugmentingStep& step = *results[best];

    accepted += 1;
    require(accepted <= cap, ErrorCode::InternalError,
            "augmentation exceeded its step cap");
    if (opts.max_iterations && accepted > *opts.max_iterations)
      fail(ErrorCode::IterationLimit, "user iteration limit exceeded");

    IntVector z_next(nv);
    for (Index j = 0; j < nv; ++j) {
      BigInt v = BigInt(z[j]) + step.lambda * step.y[j];
      require(fits_int64(v), ErrorCode::InternalError, "step left int64 range");
      z_next[j] = to_int64(v);
    }
    require(within_bounds(work, z_next) && is_zero(residual(work, z_next)),
            ErrorCode::InternalError, "intermediate point infeasible");
    BigInt value_next = objective_value(work, z_next);
    const BigInt expected =
        maximize ? BigInt(value + step.gain) : BigInt(value - step.gain);
    require(value_next == expected, ErrorCode::InternalError,
            "gain disagrees with objective change");

    z = std::move(z_next);
    value = value_next;
    stats.lambda_histogram[static_cast<unsigned>(best)] += 1;
    if (main_loop)
      stats.iterations += 1;
    else
      stats.phase_one_iterations += 1;
  }
  return LoopResult{std::move(z), std::move(value)};
}

std::optional<Solution> phase_one_impl(const Instance& inst,
                                       const SolveOptions& opts,
                                       SolveStats& stats) {
  stats.used_phase_one = true;
  const auto t0 = Clock::now();

  IntVector proj = projection_point(inst);
  if (is_zero(residual(inst, proj))) {
    stats.seconds_phase_one += elapsed(t0);
    return Solution{proj, objective_value(inst, proj)};
  }

  AuxProblem aux = build_phase_one_aux(inst);
  const Instance* aux_work = &aux.inst;
  std::optional<Instance> clamped;
  IntVector start = aux.start;

  if (!aux.inst.has_finite_bounds()) {
    stats.used_lp = true;
    const auto lp0 = Clock::now();
    LPResult lp = solve_lp(aux.inst);
    stats.seconds_lp += elapsed(lp0);
    require(lp.status == LPResult::Status::Optimal, ErrorCode::InternalError,
            "auxiliary relaxation must have an optimal vertex");
    clamped = clamp_by_proximity(aux.inst, lp.x);
    aux_work = &*clamped;
    std::optional<Solution> inner = phase_one_impl(*clamped, opts, stats);
    require(inner.has_value(), ErrorCode::InternalError,
            "auxiliary problem lost feasibility after clamping");
    start = inner->x;
  }

  LoopResult res = run_augment_loop(*aux_work, std::move(start), opts, stats,
                                    /*main_loop=*/false, BigInt(0));
  stats.seconds_phase_one += elapsed(t0);
  if (res.value != 0) return std::nullopt;

  IntVector x(inst.num_vars());
  const Index t_aux = aux.inst.t();
  for (Index i = 0; i < inst.n(); ++i)
    for (Index q = 0; q < inst.t(); ++q)
      x[i * inst.t() + q] = res.z[i * t_aux + q] + aux.anchor[i * inst.t() + q];
  return checked_solution(inst, x);
}

}  // namespace

unsigned compute_phi(const Instance& inst) {
  BigInt top = inst.delta();
  auto take = [&top](Int v) {
    BigInt a = v < 0 ? -BigInt(v) : BigInt(v);
    if (a > top) top = a;
  };
  for (Index i = 0; i < inst.rhs().size(); ++i) take(inst.rhs()[i]);
  for (Index j = 0; j < inst.num_vars(); ++j) {
    if (inst.lower()[j].is_finite()) take(inst.lower()[j].value());
    if (inst.upper()[j].is_finite()) take(inst.upper()[j].value());
  }
  std::visit(
      [&](const auto& obj) {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, LinearObjective>) {
          for (Index j = 0; j < obj.c.size(); ++j) take(obj.c[j]);
        } else {
          for (const ConvexTerm& term : obj.terms)
            std::visit(
                [&](const auto& t) {
                  using U = std::decay_t<decltype(t)>;
                  if constexpr (std::is_same_v<U, LinearTerm>) {
                    take(t.a);
                  } else if constexpr (std::is_same_v<U, QuadraticTerm>) {
                    take(t.a);
                    take(t.b);
                    take(t.c);
                  } else if constexpr (std::is_same_v<U, AbsTerm>) {
                    take(t.weight);
                    take(t.center);
                  } else {
                    for (Int v : t.breaks) take(v);
                    for (Int v : t.slopes) take(v);
                  }
                },
                term);
        }
      },
      inst.objective());
  return bit_length(top);
}

Instance clamp_by_proximity(const Instance& inst, const RationalVector& x_star) {
  require(x_star.size() == inst.num_vars(), ErrorCode::DimensionMismatch,
          "vertex has wrong length");
  const BigInt radius =
      BigInt(inst.num_vars()) * compute_LA(inst.r(), inst.s(), inst.delta());

  InstanceData d = inst.data();
  for (Index j = 0; j < inst.num_vars(); ++j) {
    BigInt lo = ceil_rational(x_star[j]) - radius;
    BigInt hi = floor_rational(x_star[j]) + radius;
    if (d.lower[j].is_finite() && BigInt(d.lower[j].value()) > lo)
      lo = d.lower[j].value();
    if (d.upper[j].is_finite() && BigInt(d.upper[j].value()) < hi)
      hi = d.upper[j].value();
    require(lo >= -kMaxEntryMagnitude && hi <= kMaxEntryMagnitude,
            ErrorCode::EntryTooLarge, "proximity window exceeds the entry range");
    d.lower[j] = Bound::finite(to_int64(lo));
    d.upper[j] = Bound::finite(to_int64(hi));
  }
  return Instance::validate(std::move(d));
}

std::optional<Solution> phase_one(const Instance& inst, const SolveOptions& opts,
                                  SolveStats* stats) {
  SolveStats local;
  return phase_one_impl(inst, opts, stats ? *stats : local);
}

SolveResult solve(const Instance& inst, const SolveOptions& opts) {
  const auto t0 = Clock::now();
  SolveResult out;
  out.stats.phi = compute_phi(inst);

  if (!is_linear(inst.objective())) {
    require(inst.has_finite_bounds(), ErrorCode::InfiniteBoundsUnsupported,
            "convex minimization needs finite bounds");
    std::optional<Solution> z0 = phase_one_impl(inst, opts, out.stats);
    if (!z0) {
      out.status = SolveStatus::Infeasible;
      out.stats.seconds_total = elapsed(t0);
      return out;
    }
    const auto a0 = Clock::now();
    LoopResult res = run_augment_loop(inst, z0->x, opts, out.stats,
                                      /*main_loop=*/true, std::nullopt);
    out.stats.seconds_augment = elapsed(a0);
    out.status = SolveStatus::Optimal;
    out.solution = Solution{res.z, res.value};
    out.stats.seconds_total = elapsed(t0);
    return out;
  }

  const Instance* work = &inst;
  std::optional<Instance> clamped;
  if (!inst.has_finite_bounds()) {
    out.stats.used_lp = true;
    const auto lp0 = Clock::now();
    LPResult lp = solve_lp(inst);
    out.stats.seconds_lp += elapsed(lp0);
    if (lp.status == LPResult::Status::Infeasible) {
      out.status = SolveStatus::Infeasible;
      out.stats.seconds_total = elapsed(t0);
      return out;
    }
    if (lp.status == LPResult::Status::Unbounded) {
      std::optional<Solution> feas = phase_one_impl(inst, opts, out.stats);
      out.status = feas ? SolveStatus::Unbounded : SolveStatus::Infeasible;
      out.stats.seconds_total = elapsed(t0);
      return out;
    }
    clamped = clamp_by_proximity(inst, lp.x);
    work = &*clamped;
  }

  std::optional<Solution> z0 = phase_one_impl(*work, opts, out.stats);
  if (!z0) {
    out.status = SolveStatus::Infeasible;
    out.stats.seconds_total = elapsed(t0);
    return out;
  }

  const auto a0 = Clock::now();
  LoopResult res = run_augment_loop(*work, z0->x, opts, out.stats,
                                    /*main_loop=*/true, std::nullopt);
  out.stats.seconds_augment = elapsed(a0);
  out.status = SolveStatus::Optimal;
  out.solution = checked_solution(inst, res.z);
  out.stats.seconds_total = elapsed(t0);
  return out;
}

SolveResult solve_convex(const Instance& inst, const SolveOptions& opts) {
  require(!is_linear(inst.objective()), ErrorCode::BadObjective,
          "expected a convex objective");
  return solve(inst, opts);
}

}  // namespace foldip
