// SPDX-License-Identifier: Apache-2.0
#include "foldip/treefold.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <unordered_map>

#include <boost/functional/hash.hpp>

#include "foldip/lp.hpp"

namespace foldip {

namespace {

constexpr Int kFastMagnitude = Int(1) << 61;

void check_entry(Int v, const char* where) {
  require(v >= -kMaxEntryMagnitude && v <= kMaxEntryMagnitude,
          ErrorCode::EntryTooLarge, std::string(where) + " entry out of range");
}

bool is_subset(const std::vector<Index>& a, const std::vector<Index>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool is_disjoint(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return true;
}

}  // namespace

TreeInstance TreeInstance::validate(TreeData data) {
  TreeInstance out;
  const Index n = data.num_cols;
  require(n >= 1, ErrorCode::EmptyInstance, "need at least one column");
  require(!data.blocks.empty(), ErrorCode::EmptyInstance,
          "need at least one block");

  Int delta = 0;
  Index total_rows = 0;
  for (const TreeBlockData& blk : data.blocks) {
    require(blk.matrix.cols() == n, ErrorCode::DimensionMismatch,
            "block has wrong column count");
    require(blk.matrix.rows() >= 1 && blk.rhs.size() == blk.matrix.rows(),
            ErrorCode::DimensionMismatch, "block rhs disagrees with rows");
    for (Index i = 0; i < blk.matrix.rows(); ++i) {
      check_entry(blk.rhs[i], "rhs");
      for (Index q = 0; q < n; ++q) {
        check_entry(blk.matrix(i, q), "matrix");
        Int a = blk.matrix(i, q) < 0 ? -blk.matrix(i, q) : blk.matrix(i, q);
        if (a > delta) delta = a;
      }
    }
    total_rows += blk.matrix.rows();
  }

  require(static_cast<Index>(data.lower.size()) == n &&
              static_cast<Index>(data.upper.size()) == n,
          ErrorCode::DimensionMismatch, "bounds have wrong length");
  for (Index j = 0; j < n; ++j) {
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

  const auto* lin = std::get_if<LinearObjective>(&data.objective);
  require(lin != nullptr, ErrorCode::BadObjective,
          "tree systems take a linear objective");
  require(lin->c.size() == n, ErrorCode::BadObjective,
          "objective has wrong length");
  for (Index j = 0; j < n; ++j) check_entry(lin->c[j], "objective");

  // supports, with equal-support blocks merged by vertical stacking
  std::vector<TreeNode> nodes;
  for (const TreeBlockData& blk : data.blocks) {
    std::vector<Index> supp;
    for (Index q = 0; q < n; ++q)
      for (Index i = 0; i < blk.matrix.rows(); ++i)
        if (blk.matrix(i, q) != 0) {
          supp.push_back(q);
          break;
        }
    require(!supp.empty(), ErrorCode::EmptySupport,
            "a block has an all-zero matrix");

    bool merged = false;
    for (TreeNode& node : nodes)
      if (node.support == supp) {
        IntMatrix stacked(node.matrix.rows() + blk.matrix.rows(), n);
        stacked.topRows(node.matrix.rows()) = node.matrix;
        stacked.bottomRows(blk.matrix.rows()) = blk.matrix;
        node.matrix = std::move(stacked);
        IntVector rhs2(node.rhs.size() + blk.rhs.size());
        rhs2.head(node.rhs.size()) = node.rhs;
        rhs2.tail(blk.rhs.size()) = blk.rhs;
        node.rhs = std::move(rhs2);
        merged = true;
        break;
      }
    if (!merged) {
      TreeNode node;
      node.matrix = blk.matrix;
      node.rhs = blk.rhs;
      node.support = std::move(supp);
      nodes.push_back(std::move(node));
    }
  }

  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const auto& sa = nodes[a].support;
      const auto& sb = nodes[b].support;
      require(is_disjoint(sa, sb) || is_subset(sa, sb) || is_subset(sb, sa),
              ErrorCode::NotLaminar, "block supports overlap without nesting");
    }

  Index root = -1;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    bool covers = true;
    for (std::size_t w = 0; w < nodes.size(); ++w)
      if (!is_subset(nodes[w].support, nodes[v].support)) {
        covers = false;
        break;
      }
    if (covers) {
      root = static_cast<Index>(v);
      break;
    }
  }
  require(root >= 0, ErrorCode::NoRoot,
          "no block support contains all the others");

  // parent: the smallest strict superset (unique by laminarity)
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (static_cast<Index>(v) == root) continue;
    Index best = -1;
    for (std::size_t w = 0; w < nodes.size(); ++w) {
      if (w == v) continue;
      if (!is_subset(nodes[v].support, nodes[w].support)) continue;
      if (best < 0 ||
          nodes[w].support.size() < nodes[static_cast<std::size_t>(best)].support.size())
        best = static_cast<Index>(w);
    }
    require(best >= 0, ErrorCode::InternalError, "missing parent");
    nodes[v].parent = best;
    nodes[static_cast<std::size_t>(best)].children.push_back(
        static_cast<Index>(v));
  }
  for (TreeNode& node : nodes)
    std::sort(node.children.begin(), node.children.end(),
              [&](Index a, Index b) {
                return nodes[static_cast<std::size_t>(a)].support.front() <
                       nodes[static_cast<std::size_t>(b)].support.front();
              });

  // private columns: support minus the children's supports
  for (TreeNode& node : nodes) {
    std::vector<bool> covered(n, false);
    for (Index c : node.children)
      for (Index q : nodes[static_cast<std::size_t>(c)].support)
        covered[static_cast<std::size_t>(q)] = true;
    for (Index q : node.support)
      if (!covered[static_cast<std::size_t>(q)]) node.private_cols.push_back(q);
  }

  // heights bottom-up (children always merge before parents here because a
  // child's support is smaller; iterate until stable for simplicity)
  {
    bool changed = true;
    while (changed) {
      changed = false;
      for (TreeNode& node : nodes) {
        Index h = 0;
        for (Index c : node.children)
          h = std::max(h, nodes[static_cast<std::size_t>(c)].height + 1);
        if (h != node.height) {
          node.height = h;
          changed = true;
        }
      }
    }
  }

  const Index tau = nodes[static_cast<std::size_t>(root)].height + 1;
  std::vector<Index> layer_max(static_cast<std::size_t>(tau), 0);
  for (const TreeNode& node : nodes)
    layer_max[static_cast<std::size_t>(node.height)] =
        std::max(layer_max[static_cast<std::size_t>(node.height)],
                 node.matrix.rows());
  Index sigma = 0;
  for (Index v : layer_max) sigma += v;

  // DP column order: private columns first, then children, depth first;
  // columns outside every support trail at the end
  std::vector<Index> order;
  {
    std::vector<bool> seen_col(n, false);
    std::function<void(Index)> rec = [&](Index v) {
      const TreeNode& node = nodes[static_cast<std::size_t>(v)];
      for (Index q : node.private_cols) {
        order.push_back(q);
        seen_col[static_cast<std::size_t>(q)] = true;
      }
      for (Index c : node.children) rec(c);
    };
    rec(root);
    for (Index q = 0; q < n; ++q)
      if (!seen_col[static_cast<std::size_t>(q)]) {
        order.push_back(q);
        out.loose_cols_.push_back(q);
      }
  }
  require(static_cast<Index>(order.size()) == n, ErrorCode::InternalError,
          "column order must be a permutation");

  out.data_ = std::move(data);
  out.nodes_ = std::move(nodes);
  out.root_ = root;
  out.num_rows_ = total_rows;
  out.delta_ = delta;
  out.layer_row_maxima_ = std::move(layer_max);
  out.sigma_ = sigma;
  out.column_order_ = std::move(order);
  return out;
}

IntMatrix assemble_matrix(const TreeInstance& inst) {
  IntMatrix m(inst.num_rows(), inst.num_cols());
  Index at = 0;
  for (const TreeBlockData& blk : inst.data().blocks) {
    m.middleRows(at, blk.matrix.rows()) = blk.matrix;
    at += blk.matrix.rows();
  }
  return m;
}

IntVector assemble_rhs(const TreeInstance& inst) {
  IntVector b(inst.num_rows());
  Index at = 0;
  for (const TreeBlockData& blk : inst.data().blocks) {
    b.segment(at, blk.rhs.size()) = blk.rhs;
    at += blk.rhs.size();
  }
  return b;
}

BigVector residual(const TreeInstance& inst, const IntVector& x) {
  require(x.size() == inst.num_cols(), ErrorCode::DimensionMismatch,
          "point has wrong length");
  BigVector res(inst.num_rows());
  Index at = 0;
  for (const TreeBlockData& blk : inst.data().blocks) {
    for (Index i = 0; i < blk.matrix.rows(); ++i) {
      BigInt acc = blk.rhs[i];
      for (Index q = 0; q < inst.num_cols(); ++q)
        if (blk.matrix(i, q) != 0) acc -= BigInt(blk.matrix(i, q)) * x[q];
      res[at + i] = acc;
    }
    at += blk.matrix.rows();
  }
  return res;
}

TreeBoundsReport compute_bounds_report(const TreeInstance& inst) {
  TreeBoundsReport rep;
  rep.num_cols = inst.num_cols();
  rep.delta = inst.delta();
  rep.tau = inst.tau();
  rep.sigma = inst.sigma();
  rep.layer_row_maxima = inst.layer_row_maxima();
  rep.L_tau = compute_Ltau(inst.layer_row_maxima(), inst.delta());
  rep.gamma = compute_gamma(inst.lower(), inst.upper());
  if (inst.has_finite_bounds()) {
    BigInt total = 0;
    for (Index j = 0; j < inst.num_cols(); ++j) {
      total += BigInt(inst.upper()[j].value()) - inst.lower()[j].value();
      if (total >= rep.L_tau) break;
    }
    rep.effective = total < rep.L_tau ? total : rep.L_tau;
  } else {
    rep.effective = rep.L_tau;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Solver internals.  A TreeWork is the tree instance plus optional slack
// columns (one per node row during the feasibility phase), with its own
// bounds and costs; the layered search consumes plan positions whose state
// is the stacked row values of the currently open node chain.

namespace {

struct ExtraCol {
  Index node;
  Index row;
  Int coeff;
};

struct TreeWork {
  const TreeInstance* tree = nullptr;
  std::vector<ExtraCol> extras;
  BoundVec lower, upper;
  IntVector costs;
  IntVector rhs;  // stacked in node order
  Int delta = 0;

  Index num_base() const { return tree->num_cols(); }
  Index num_vars() const {
    return num_base() + static_cast<Index>(extras.size());
  }
};

struct PlanPos {
  Index var;
  std::vector<Index> opens;
  Index closes = 0;
  std::vector<Int> entries;  // stacked over the open chain, root first
};

Index node_row_offset(const TreeInstance& tr, Index node) {
  Index at = 0;
  for (Index v = 0; v < node; ++v)
    at += tr.nodes()[static_cast<std::size_t>(v)].matrix.rows();
  return at;
}

TreeWork make_base_work(const TreeInstance& tr) {
  TreeWork w;
  w.tree = &tr;
  w.lower = tr.lower();
  w.upper = tr.upper();
  w.costs = tr.linear_costs();
  w.delta = tr.delta();
  w.rhs.resize(tr.num_rows());
  Index at = 0;
  for (const TreeNode& node : tr.nodes()) {
    w.rhs.segment(at, node.rhs.size()) = node.rhs;
    at += node.rhs.size();
  }
  return w;
}

BigVector residual_work(const TreeWork& w, const IntVector& x) {
  const TreeInstance& tr = *w.tree;
  BigVector res(tr.num_rows());
  Index at = 0;
  for (const TreeNode& node : tr.nodes()) {
    for (Index i = 0; i < node.matrix.rows(); ++i) {
      BigInt acc = w.rhs[at + i];
      for (Index q : node.support)
        acc -= BigInt(node.matrix(i, q)) * x[q];
      res[at + i] = acc;
    }
    at += node.matrix.rows();
  }
  for (std::size_t k = 0; k < w.extras.size(); ++k) {
    const ExtraCol& e = w.extras[k];
    const Index var = w.num_base() + static_cast<Index>(k);
    if (x[var] == 0 || e.coeff == 0) continue;
    res[node_row_offset(tr, e.node) + e.row] -= BigInt(e.coeff) * x[var];
  }
  return res;
}

bool work_in_bounds(const TreeWork& w, const IntVector& x) {
  for (Index j = 0; j < w.num_vars(); ++j) {
    if (w.lower[j].is_finite() && x[j] < w.lower[j].value()) return false;
    if (w.upper[j].is_finite() && x[j] > w.upper[j].value()) return false;
  }
  return true;
}

std::vector<PlanPos> build_positions(const TreeWork& w) {
  const TreeInstance& tr = *w.tree;
  std::vector<std::vector<Index>> extras_of(tr.nodes().size());
  for (std::size_t k = 0; k < w.extras.size(); ++k)
    extras_of[static_cast<std::size_t>(w.extras[k].node)].push_back(
        w.num_base() + static_cast<Index>(k));

  std::vector<PlanPos> plan;
  std::vector<Index> chain;
  std::vector<Index> pending_opens;

  auto emit = [&](Index var) {
    PlanPos p;
    p.var = var;
    p.opens = std::move(pending_opens);
    pending_opens.clear();
    for (Index v : chain) {
      const TreeNode& node = tr.nodes()[static_cast<std::size_t>(v)];
      for (Index i = 0; i < node.matrix.rows(); ++i) {
        Int entry = 0;
        if (var < w.num_base()) {
          entry = node.matrix(i, var);
        } else {
          const ExtraCol& e = w.extras[static_cast<std::size_t>(var - w.num_base())];
          if (e.node == v && e.row == i) entry = e.coeff;
        }
        p.entries.push_back(entry);
      }
    }
    plan.push_back(std::move(p));
  };

  std::function<void(Index)> rec = [&](Index v) {
    pending_opens.push_back(v);
    chain.push_back(v);
    const TreeNode& node = tr.nodes()[static_cast<std::size_t>(v)];
    for (Index q : node.private_cols) emit(q);
    for (Index c : node.children) rec(c);
    for (Index var : extras_of[static_cast<std::size_t>(v)]) emit(var);
    require(!plan.empty() && pending_opens.empty(), ErrorCode::InternalError,
            "tree interval with no columns");
    plan.back().closes += 1;
    chain.pop_back();
  };
  rec(tr.root());
  for (Index q : tr.loose_cols()) emit(q);
  require(static_cast<Index>(plan.size()) == w.num_vars(),
          ErrorCode::InternalError, "plan must cover every variable");
  return plan;
}

struct TreeWindow {
  BigInt lo, hi;
};

std::vector<TreeWindow> tree_windows(const TreeWork& w, const IntVector& z,
                                     const BigInt& lambda, const BigInt& cap) {
  std::vector<TreeWindow> out(w.num_vars());
  for (Index j = 0; j < w.num_vars(); ++j) {
    BigInt lo = -cap, hi = cap;
    if (w.lower[j].is_finite()) {
      BigInt d = ceil_div(BigInt(w.lower[j].value()) - z[j], lambda);
      if (d > lo) lo = d;
    }
    if (w.upper[j].is_finite()) {
      BigInt d = floor_div(BigInt(w.upper[j].value()) - z[j], lambda);
      if (d < hi) hi = d;
    }
    require(lo <= 0 && hi >= 0, ErrorCode::InternalError,
            "point outside bounds while clamping");
    out[j] = TreeWindow{std::move(lo), std::move(hi)};
  }
  return out;
}

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

template <class SI>
struct TreeLayer {
  Index dim = 0;
  std::vector<SI> keys;
  std::vector<BigInt> weight;
  std::vector<std::int64_t> pred;
  std::vector<SI> mult;

  Index size() const { return static_cast<Index>(weight.size()); }
};

template <class SI>
std::optional<std::pair<BigVector, BigInt>> tree_dp(
    const TreeWork& w, const std::vector<PlanPos>& plan,
    const std::vector<TreeWindow>& windows, const BigInt& lambda,
    const SI& state_cap) {
  const TreeInstance& tr = *w.tree;
  const Index npos = static_cast<Index>(plan.size());

  std::vector<TreeLayer<SI>> layers(npos + 1);
  layers[0].dim = 0;
  layers[0].weight.assign(1, BigInt(0));
  layers[0].pred.assign(1, -1);
  layers[0].mult.assign(1, SI(0));

  Index cur_dim = 0;
  std::vector<Index> chain_rows;  // rows per open node, root first

  for (Index p = 0; p < npos; ++p) {
    const PlanPos& pos = plan[p];
    Index open_rows = 0;
    for (Index v : pos.opens) {
      const Index rows = tr.nodes()[static_cast<std::size_t>(v)].matrix.rows();
      chain_rows.push_back(rows);
      open_rows += rows;
    }
    const Index dim_in = cur_dim + open_rows;
    require(static_cast<Index>(pos.entries.size()) == dim_in,
            ErrorCode::InternalError, "plan entries disagree with open chain");
    Index close_rows = 0;
    for (Index k = 0; k < pos.closes; ++k) {
      close_rows += chain_rows.back();
      chain_rows.pop_back();
    }
    const Index dim_out = dim_in - close_rows;

    SI wlo, whi;
    if constexpr (std::is_same_v<SI, Int>) {
      wlo = to_int64(windows[pos.var].lo);
      whi = to_int64(windows[pos.var].hi);
    } else {
      wlo = windows[pos.var].lo;
      whi = windows[pos.var].hi;
    }
    const BigInt arc_cost = lambda * w.costs[pos.var];

    TreeLayer<SI>& prev = layers[p];
    TreeLayer<SI>& next = layers[p + 1];
    next.dim = dim_out;
    std::unordered_map<std::vector<SI>, Index, VecHash<SI>> seen;
    std::vector<SI> full(dim_in);
    std::vector<SI> key(dim_out);

    for (Index node = 0; node < prev.size(); ++node) {
      const SI* pkey = prev.keys.data() + node * prev.dim;
      for (SI m = wlo; m <= whi; ++m) {
        bool ok = true;
        for (Index i = 0; i < dim_in && ok; ++i) {
          SI base = i < prev.dim ? pkey[i] : SI(0);
          full[i] = base + m * SI(pos.entries[static_cast<std::size_t>(i)]);
          if (full[i] > state_cap || -full[i] > state_cap) ok = false;
        }
        for (Index i = dim_out; i < dim_in && ok; ++i)
          if (full[i] != 0) ok = false;
        if (!ok) continue;
        key.assign(full.begin(), full.begin() + dim_out);

        BigInt weight = prev.weight[node] + arc_cost * BigInt(m);
        auto [it, inserted] = seen.try_emplace(key, next.size());
        if (inserted) {
          next.keys.insert(next.keys.end(), key.begin(), key.end());
          next.weight.push_back(std::move(weight));
          next.pred.push_back(node);
          next.mult.push_back(m);
        } else {
          Index idx = it->second;
          if (weight > next.weight[idx] ||
              (weight == next.weight[idx] && m < next.mult[idx])) {
            next.weight[idx] = std::move(weight);
            next.pred[idx] = node;
            next.mult[idx] = m;
          }
        }
      }
    }
    require(next.size() > 0, ErrorCode::InternalError,
            "zero path lost in tree search");
    cur_dim = dim_out;
  }
  require(cur_dim == 0 && layers[npos].size() == 1, ErrorCode::InternalError,
          "tree search must end in the empty state");

  if (!(layers[npos].weight[0] > 0)) return std::nullopt;

  BigVector y(w.num_vars());
  for (Index j = 0; j < w.num_vars(); ++j) y[j] = 0;
  Index idx = 0;
  for (Index p = npos; p >= 1; --p) {
    y[plan[p - 1].var] = BigInt(layers[p].mult[idx]);
    idx = static_cast<Index>(layers[p].pred[idx]);
  }
  return std::make_pair(std::move(y), BigInt(layers[npos].weight[0]));
}

std::optional<std::pair<BigVector, BigInt>> tree_dp_dispatch(
    const TreeWork& w, const std::vector<PlanPos>& plan, const IntVector& z,
    const BigInt& lambda, const BigInt& norm_cap) {
  std::vector<TreeWindow> windows = tree_windows(w, z, lambda, norm_cap);
  const BigInt radius = BigInt(w.delta) * norm_cap;
  std::optional<std::pair<BigVector, BigInt>> got;
  if (norm_cap <= kFastMagnitude && radius <= kFastMagnitude)
    got = tree_dp<Int>(w, plan, windows, lambda, to_int64(radius));
  else
    got = tree_dp<BigInt>(w, plan, windows, lambda, radius);
  if (!got) return got;

  // kernel and box guards on the reported direction
  const BigVector& y = got->first;
  const TreeInstance& tr = *w.tree;
  std::vector<BigInt> sums(static_cast<std::size_t>(tr.num_rows()), BigInt(0));
  Index at = 0;
  for (const TreeNode& node : tr.nodes()) {
    for (Index i = 0; i < node.matrix.rows(); ++i) {
      BigInt& acc = sums[static_cast<std::size_t>(at + i)];
      for (Index q : node.support)
        if (y[q] != 0) acc += BigInt(node.matrix(i, q)) * y[q];
    }
    at += node.matrix.rows();
  }
  for (std::size_t k = 0; k < w.extras.size(); ++k) {
    const ExtraCol& e = w.extras[k];
    const BigInt& v = y[w.num_base() + static_cast<Index>(k)];
    if (v != 0 && e.coeff != 0)
      sums[static_cast<std::size_t>(node_row_offset(tr, e.node) + e.row)] +=
          BigInt(e.coeff) * v;
  }
  for (const BigInt& s : sums)
    require(s == 0, ErrorCode::InternalError,
            "tree direction leaves the kernel");
  for (Index j = 0; j < w.num_vars(); ++j) {
    const BigInt moved = BigInt(z[j]) + lambda * y[j];
    if (w.lower[j].is_finite())
      require(moved >= w.lower[j].value(), ErrorCode::InternalError,
              "tree direction breaks a lower bound");
    if (w.upper[j].is_finite())
      require(moved <= w.upper[j].value(), ErrorCode::InternalError,
              "tree direction breaks an upper bound");
  }
  return got;
}

BigInt work_norm_bound(const TreeWork& w) {
  const BigInt L = compute_Ltau(w.tree->layer_row_maxima(), w.delta);
  BigInt total = 0;
  for (Index j = 0; j < w.num_vars(); ++j) {
    total += BigInt(w.upper[j].value()) - w.lower[j].value();
    if (total >= L) return L;
  }
  return total;
}

BigInt work_gamma(const TreeWork& w) {
  BigInt g = 1;
  for (Index j = 0; j < w.num_vars(); ++j) {
    BigInt width = BigInt(w.upper[j].value()) - w.lower[j].value();
    if (width > g) g = width;
  }
  return g;
}

BigInt work_value(const TreeWork& w, const IntVector& x) {
  BigInt acc = 0;
  for (Index j = 0; j < w.num_vars(); ++j)
    if (w.costs[j] != 0 && x[j] != 0) acc += BigInt(w.costs[j]) * x[j];
  return acc;
}

BigInt tree_steps_cap(const BigInt& X, Index num_vars) {
  if (X <= 1) return 1;
  const BigInt power = big_pow(X, static_cast<unsigned>(4 * num_vars));
  return BigInt(bit_length(power) - 1) + 1;
}

bool work_all_finite(const TreeWork& w) {
  return all_finite(w.lower, w.upper);
}

struct TreeLoopResult {
  IntVector z;
  BigInt value;
};

TreeLoopResult run_tree_loop(const TreeWork& w, IntVector z,
                             const TreeSolveOptions& opts,
                             TreeSolveStats& stats, bool main_loop,
                             const std::optional<BigInt>& stop_value) {
  require(work_all_finite(w), ErrorCode::InfiniteBoundsUnsupported,
          "augmentation needs finite bounds");
  require(is_zero(residual_work(w, z)) && work_in_bounds(w, z),
          ErrorCode::InternalError, "augmentation started infeasibly");

  const std::vector<PlanPos> plan = build_positions(w);
  const BigInt E = work_norm_bound(w);
  const BigInt gamma = work_gamma(w);
  int max_exp = static_cast<int>(ceil_log2(gamma)) + 1;
  if (opts.lambda_max_exp) max_exp = std::max(0, *opts.lambda_max_exp);

  Int maxc = 0;
  for (Index j = 0; j < w.num_vars(); ++j)
    maxc = std::max(maxc, w.costs[j] < 0 ? -w.costs[j] : w.costs[j]);
  const BigInt X = BigInt(w.num_vars()) * gamma * maxc;
  const BigInt cap = tree_steps_cap(X, w.num_vars());
  if (main_loop) stats.iteration_cap = cap;

  BigInt value = work_value(w, z);
  BigInt steps = 0;
  const Index num_candidates = static_cast<Index>(max_exp) + 1;
  std::vector<std::optional<std::pair<BigVector, BigInt>>> results(
      static_cast<std::size_t>(num_candidates));

  while (true) {
    if (stop_value && value == *stop_value) break;

    auto sweep = [&](Index first, Index stride) {
      for (Index i = first; i < num_candidates; i += stride)
        results[static_cast<std::size_t>(i)] =
            tree_dp_dispatch(w, plan, z, BigInt(1) << static_cast<unsigned>(i), E);
    };
    const Index k = std::max<Index>(
        1, std::min<Index>(opts.threads, num_candidates));
    if (k == 1) {
      sweep(0, 1);
    } else {
      std::vector<std::future<void>> workers;
      for (Index wk = 1; wk < k; ++wk)
        workers.push_back(std::async(std::launch::async, sweep, wk, k));
      sweep(0, k);
      for (auto& f : workers) f.get();
    }
    stats.dp_calls += num_candidates;

    Index best = -1;
    for (Index i = 0; i < num_candidates; ++i)
      if (results[static_cast<std::size_t>(i)] &&
          (best < 0 || results[static_cast<std::size_t>(i)]->second >
                           results[static_cast<std::size_t>(best)]->second))
        best = i;
    if (best < 0) break;

    ++steps;
    if (main_loop) {
      ++stats.iterations;
      require(stats.iterations <= cap, ErrorCode::InternalError,
              "augmentation exceeded its step bound");
      if (opts.max_iterations)
        require(stats.iterations <= *opts.max_iterations,
                ErrorCode::IterationLimit, "augmentation hit --max-iter");
    } else {
      require(steps <= cap, ErrorCode::InternalError,
              "feasibility augmentation exceeded its step bound");
    }

    const BigInt lambda = BigInt(1) << static_cast<unsigned>(best);
    const auto& [y, gain] = *results[static_cast<std::size_t>(best)];
    for (Index j = 0; j < w.num_vars(); ++j) {
      const BigInt next = BigInt(z[j]) + lambda * y[j];
      require(fits_int64(next), ErrorCode::InternalError,
              "augmented point overflows");
      z[j] = to_int64(next);
    }
    require(work_in_bounds(w, z) && is_zero(residual_work(w, z)),
            ErrorCode::InternalError, "augmented point infeasible");
    const BigInt value_next = work_value(w, z);
    require(value_next == value + gain, ErrorCode::InternalError,
            "gain disagrees with objective change");
    value = std::move(value_next);
  }
  return TreeLoopResult{std::move(z), std::move(value)};
}

std::optional<IntVector> work_projection(const TreeWork& w) {
  IntVector x(w.num_vars());
  for (Index j = 0; j < w.num_vars(); ++j) {
    Int v = 0;
    if (w.lower[j].is_finite() && v < w.lower[j].value())
      v = w.lower[j].value();
    if (w.upper[j].is_finite() && v > w.upper[j].value())
      v = w.upper[j].value();
    x[j] = v;
  }
  if (!is_zero(residual_work(w, x))) return std::nullopt;
  return x;
}

// feasibility slacks: one fresh column per node row, carrying the residual
// of the anchor point as its coefficient
struct TreeAux {
  TreeWork work;
  IntVector start;
  IntVector anchor;
  Index num_old;  // variables inherited from the parent work
};

TreeAux make_tree_aux(const TreeWork& parent) {
  const TreeInstance& tr = *parent.tree;
  IntVector anchor(parent.num_vars());
  for (Index j = 0; j < parent.num_vars(); ++j) {
    Int v = 0;
    if (parent.lower[j].is_finite() && v < parent.lower[j].value())
      v = parent.lower[j].value();
    if (parent.upper[j].is_finite() && v > parent.upper[j].value())
      v = parent.upper[j].value();
    anchor[j] = v;
  }
  const BigVector res = residual_work(parent, anchor);

  TreeAux aux;
  aux.anchor = std::move(anchor);
  aux.num_old = parent.num_vars();
  TreeWork& w = aux.work;
  w.tree = parent.tree;
  w.extras = parent.extras;
  w.delta = parent.delta;
  w.rhs = parent.rhs;

  const Index total = parent.num_vars() + tr.num_rows();
  w.lower.assign(static_cast<std::size_t>(total), Bound::finite(0));
  w.upper.assign(static_cast<std::size_t>(total), Bound::finite(0));
  w.costs = IntVector::Zero(total);
  aux.start = IntVector::Zero(total);

  // inherited variables, shifted so the anchor sits at the origin
  for (Index j = 0; j < parent.num_vars(); ++j) {
    if (parent.lower[j].is_finite())
      w.lower[j] = Bound::finite(parent.lower[j].value() - aux.anchor[j]);
    else
      w.lower[j] = Bound::neg_inf();
    if (parent.upper[j].is_finite())
      w.upper[j] = Bound::finite(parent.upper[j].value() - aux.anchor[j]);
    else
      w.upper[j] = Bound::pos_inf();
  }
  // the shifted system solves for x - anchor, so its right side is the
  // anchor residual
  w.rhs.resize(tr.num_rows());
  for (Index i = 0; i < tr.num_rows(); ++i) {
    require(res[i] >= -kMaxEntryMagnitude && res[i] <= kMaxEntryMagnitude,
            ErrorCode::EntryTooLarge, "anchor residual out of range");
    w.rhs[i] = to_int64(res[i]);
  }

  Index node_id = 0;
  Index row_at = 0;
  for (const TreeNode& node : tr.nodes()) {
    for (Index i = 0; i < node.matrix.rows(); ++i) {
      const Index var = aux.num_old + row_at + i;
      const Int coeff = w.rhs[row_at + i];
      w.extras.push_back(ExtraCol{node_id, i, coeff});
      w.lower[var] = Bound::finite(0);
      w.upper[var] = Bound::finite(1);
      w.costs[var] = -1;
      aux.start[var] = 1;
      if (coeff < 0) w.delta = std::max(w.delta, -coeff);
      if (coeff > 0) w.delta = std::max(w.delta, coeff);
    }
    row_at += node.matrix.rows();
    ++node_id;
  }
  require(is_zero(residual_work(w, aux.start)), ErrorCode::InternalError,
          "feasibility start must satisfy the slack system");
  return aux;
}

IntMatrix work_dense(const TreeWork& w) {
  const TreeInstance& tr = *w.tree;
  IntMatrix m = IntMatrix::Zero(tr.num_rows(), w.num_vars());
  Index at = 0;
  for (const TreeNode& node : tr.nodes()) {
    for (Index i = 0; i < node.matrix.rows(); ++i)
      for (Index q : node.support) m(at + i, q) = node.matrix(i, q);
    at += node.matrix.rows();
  }
  for (std::size_t k = 0; k < w.extras.size(); ++k) {
    const ExtraCol& e = w.extras[k];
    m(node_row_offset(tr, e.node) + e.row,
      w.num_base() + static_cast<Index>(k)) = e.coeff;
  }
  return m;
}

void clamp_work_by_proximity(TreeWork& w, const RationalVector& x_star) {
  const BigInt L = compute_Ltau(w.tree->layer_row_maxima(), w.delta);
  const BigInt radius = BigInt(w.num_vars()) * L;
  for (Index j = 0; j < w.num_vars(); ++j) {
    const BigInt lo_new = ceil_rational(x_star[j]) - radius;
    const BigInt hi_new = floor_rational(x_star[j]) + radius;
    BigInt lo = lo_new;
    if (w.lower[j].is_finite() && BigInt(w.lower[j].value()) > lo)
      lo = w.lower[j].value();
    BigInt hi = hi_new;
    if (w.upper[j].is_finite() && BigInt(w.upper[j].value()) < hi)
      hi = w.upper[j].value();
    require(lo <= hi, ErrorCode::InternalError,
            "proximity window collapsed below a vertex");
    require(fits_int64(lo) && fits_int64(hi) &&
                to_int64(lo) >= -kMaxEntryMagnitude &&
                to_int64(hi) <= kMaxEntryMagnitude,
            ErrorCode::EntryTooLarge, "proximity window out of range");
    w.lower[j] = Bound::finite(to_int64(lo));
    w.upper[j] = Bound::finite(to_int64(hi));
  }
}

// returns a feasible point of `w`, or nullopt when none exists
std::optional<IntVector> tree_phase_one(const TreeWork& w,
                                        const TreeSolveOptions& opts,
                                        TreeSolveStats& stats, int depth) {
  require(depth <= 2, ErrorCode::InternalError,
          "feasibility recursion too deep");
  if (auto direct = work_projection(w); direct && work_in_bounds(w, *direct))
    return direct;
  stats.used_phase_one = true;

  TreeAux aux = make_tree_aux(w);
  IntVector start;
  if (work_all_finite(aux.work)) {
    start = aux.start;
  } else {
    stats.used_lp = true;
    LPResult lp = solve_lp_dense(work_dense(aux.work), aux.work.rhs,
                                 aux.work.lower, aux.work.upper,
                                 aux.work.costs);
    require(lp.status == LPResult::Status::Optimal, ErrorCode::InternalError,
            "slack relaxation must have an optimum");
    clamp_work_by_proximity(aux.work, lp.x);
    auto inner = tree_phase_one(aux.work, opts, stats, depth + 1);
    require(inner.has_value(), ErrorCode::InternalError,
            "clamped slack system lost feasibility");
    start = std::move(*inner);
  }

  TreeLoopResult res = run_tree_loop(aux.work, std::move(start), opts, stats,
                                     /*main_loop=*/false, BigInt(0));
  if (res.value != 0) return std::nullopt;
  IntVector x(w.num_vars());
  for (Index j = 0; j < w.num_vars(); ++j)
    x[j] = res.z[j] + aux.anchor[j];
  require(work_in_bounds(w, x) && is_zero(residual_work(w, x)),
          ErrorCode::InternalError, "feasibility phase returned a bad point");
  return x;
}

}  // namespace

std::optional<TreeAugmentingStep> solve_tree_augmentation(
    const TreeInstance& inst, const IntVector& z, const BigInt& lambda,
    const BigInt& norm_cap) {
  require(z.size() == inst.num_cols(), ErrorCode::DimensionMismatch,
          "point has wrong length");
  TreeWork w = make_base_work(inst);
  require(work_in_bounds(w, z) && is_zero(residual(inst, z)),
          ErrorCode::InternalError, "augmentation expects a feasible point");
  const std::vector<PlanPos> plan = build_positions(w);
  auto got = tree_dp_dispatch(w, plan, z, lambda, norm_cap);
  if (!got) return std::nullopt;
  TreeAugmentingStep step;
  step.lambda = lambda;
  step.y = std::move(got->first);
  step.gain = std::move(got->second);
  return step;
}

TreeSolveResult solve_treefold(const TreeInstance& inst,
                               const TreeSolveOptions& opts) {
  TreeSolveResult out;

  TreeWork work = make_base_work(inst);
  if (!work_all_finite(work)) {
    out.stats.used_lp = true;
    LPResult lp = solve_lp_dense(work_dense(work), work.rhs, work.lower,
                                 work.upper, work.costs);
    if (lp.status == LPResult::Status::Infeasible) {
      out.status = TreeSolveStatus::Infeasible;
      return out;
    }
    if (lp.status == LPResult::Status::Unbounded) {
      auto feasible = tree_phase_one(work, opts, out.stats, 0);
      out.status = feasible ? TreeSolveStatus::Unbounded
                            : TreeSolveStatus::Infeasible;
      return out;
    }
    clamp_work_by_proximity(work, lp.x);
  }

  auto z0 = tree_phase_one(work, opts, out.stats, 0);
  if (!z0) {
    out.status = TreeSolveStatus::Infeasible;
    return out;
  }
  TreeLoopResult res = run_tree_loop(work, std::move(*z0), opts, out.stats,
                                     /*main_loop=*/true, std::nullopt);

  bool in_box = true;
  for (Index j = 0; j < inst.num_cols(); ++j) {
    if (inst.lower()[j].is_finite() && res.z[j] < inst.lower()[j].value())
      in_box = false;
    if (inst.upper()[j].is_finite() && res.z[j] > inst.upper()[j].value())
      in_box = false;
  }
  require(in_box && is_zero(residual(inst, res.z)), ErrorCode::InternalError,
          "solver returned an infeasible point");
  BigInt check = 0;
  for (Index j = 0; j < inst.num_cols(); ++j)
    if (inst.linear_costs()[j] != 0 && res.z[j] != 0)
      check += BigInt(inst.linear_costs()[j]) * res.z[j];
  require(check == res.value, ErrorCode::InternalError,
          "reported value disagrees with the objective");

  out.status = TreeSolveStatus::Optimal;
  out.solution = Solution{std::move(res.z), std::move(res.value)};
  return out;
}

}  // namespace foldip
