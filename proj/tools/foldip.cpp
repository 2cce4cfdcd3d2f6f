// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "foldip/driver.hpp"
#include "foldip/generate.hpp"
#include "foldip/io.hpp"
#include "foldip/lp.hpp"
#include "foldip/oracle.hpp"
#include "foldip/treefold.hpp"

using namespace foldip;

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnbounded = 3;

json describe(const Problem& p) {
  json d;
  d["digest"] = problem_digest(p);
  if (const auto* inst = std::get_if<Instance>(&p)) {
    d["kind"] = "nfold";
    d["n"] = inst->n();
    d["r"] = inst->r();
    d["s"] = inst->s();
    d["t"] = inst->t();
    d["delta"] = inst->delta();
    d["num_vars"] = inst->num_vars();
    d["objective"] = is_linear(inst->objective()) ? "linear" : "convex";
  } else {
    const auto& tree = std::get<TreeInstance>(p);
    d["kind"] = "treefold";
    d["cols"] = tree.num_cols();
    d["rows"] = tree.num_rows();
    d["nodes"] = static_cast<Index>(tree.nodes().size());
    d["tau"] = tree.tau();
    d["sigma"] = tree.sigma();
    d["delta"] = tree.delta();
    d["objective"] = "linear";
  }
  return d;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = canonical_text(j);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    require(f.good(), ErrorCode::ParseError, "cannot open " + out_path);
    f << text;
  }
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    default:
      return "unbounded";
  }
}

int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return kExitOptimal;
    case SolveStatus::Infeasible:
      return kExitInfeasible;
    default:
      return kExitUnbounded;
  }
}

json solution_json(const IntVector& x) {
  json a = json::array();
  for (Index j = 0; j < x.size(); ++j) a.push_back(x[j]);
  return a;
}

json stats_json(const SolveStats& st, bool timing) {
  json s;
  s["iterations"] = to_string(st.iterations);
  s["phase_one_iterations"] = to_string(st.phase_one_iterations);
  s["dp_calls"] = to_string(st.dp_calls);
  s["iteration_cap"] = to_string(st.iteration_cap);
  s["phi"] = st.phi;
  s["used_lp"] = st.used_lp;
  s["used_phase_one"] = st.used_phase_one;
  json h = json::object();
  for (const auto& [exp, count] : st.lambda_histogram)
    h[std::to_string(exp)] = to_string(count);
  s["lambda_histogram"] = std::move(h);
  if (timing) {
    json t;
    t["total_s"] = st.seconds_total;
    t["lp_s"] = st.seconds_lp;
    t["phase_one_s"] = st.seconds_phase_one;
    t["augment_s"] = st.seconds_augment;
    s["timing"] = std::move(t);
  }
  return s;
}

json tree_stats_json(const TreeSolveStats& st) {
  json s;
  s["iterations"] = to_string(st.iterations);
  s["dp_calls"] = to_string(st.dp_calls);
  s["iteration_cap"] = to_string(st.iteration_cap);
  s["used_lp"] = st.used_lp;
  s["used_phase_one"] = st.used_phase_one;
  return s;
}

int cmd_validate(const std::string& file, const std::string& out) {
  Problem p = load_problem_file(file);
  json rep = describe(p);
  rep["valid"] = true;
  emit(rep, out);
  return kExitOptimal;
}

json bounds_json(const Problem& p) {
  json rep;
  if (const auto* inst = std::get_if<Instance>(&p)) {
    BoundsReport b = compute_bounds_report(*inst);
    rep["L_B"] = to_string(b.L_B);
    rep["L_A"] = to_string(b.L_A);
    rep["gamma"] = b.gamma ? json(to_string(*b.gamma)) : json(nullptr);
    rep["effective_norm_bound"] = to_string(b.effective);
    rep["phi"] = compute_phi(*inst);
  } else {
    const auto& tree = std::get<TreeInstance>(p);
    TreeBoundsReport b = compute_bounds_report(tree);
    json layers = json::array();
    for (Index v : b.layer_row_maxima) layers.push_back(v);
    rep["layer_row_maxima"] = std::move(layers);
    rep["L_tau"] = to_string(b.L_tau);
    rep["gamma"] = b.gamma ? json(to_string(*b.gamma)) : json(nullptr);
    rep["effective_norm_bound"] = to_string(b.effective);
  }
  return rep;
}

int cmd_bounds(const std::string& file, const std::string& out) {
  Problem p = load_problem_file(file);
  json rep = describe(p);
  rep.update(bounds_json(p));
  emit(rep, out);
  return kExitOptimal;
}

int cmd_lp_only(const Problem& p, const std::string& out) {
  LPResult lp;
  if (const auto* inst = std::get_if<Instance>(&p)) {
    lp = solve_lp(*inst);
  } else {
    const auto& tree = std::get<TreeInstance>(p);
    lp = solve_lp_dense(assemble_matrix(tree), assemble_rhs(tree),
                        tree.lower(), tree.upper(), tree.linear_costs());
  }
  json rep;
  rep["instance"] = describe(p);
  SolveStatus st = SolveStatus::Infeasible;
  if (lp.status == LPResult::Status::Optimal) st = SolveStatus::Optimal;
  if (lp.status == LPResult::Status::Unbounded) st = SolveStatus::Unbounded;
  rep["status"] = status_name(st);
  if (lp.status == LPResult::Status::Optimal) {
    rep["value"] = to_string(lp.value);
    json pt = json::array();
    for (Index j = 0; j < lp.x.size(); ++j) pt.push_back(to_string(lp.x[j]));
    rep["point"] = std::move(pt);
  }
  emit(rep, out);
  return status_exit(st);
}

struct SolveFlags {
  int threads = 1;
  Int max_iter = -1;
  int lambda_max = -1;
  bool lp_only = false;
  bool oracle_check = false;
  bool no_timing = false;
  Int box_cap = kDefaultBoxCap;
};

void oracle_cross_check(const Problem& p, SolveStatus status,
                        const std::optional<Solution>& sol, const Int box_cap,
                        json& rep) {
  OracleResult ref;
  if (const auto* inst = std::get_if<Instance>(&p)) {
    ref = brute_force_solve(*inst, box_cap);
  } else {
    const auto& tree = std::get<TreeInstance>(p);
    ref = brute_force_solve_dense(assemble_matrix(tree), assemble_rhs(tree),
                                  tree.lower(), tree.upper(),
                                  tree.data().objective, box_cap);
  }
  json o;
  o["status"] = ref.status == OracleResult::Status::Optimal ? "optimal"
                                                            : "infeasible";
  if (ref.status == OracleResult::Status::Optimal)
    o["value"] = to_string(ref.value);
  rep["oracle"] = std::move(o);

  if (status == SolveStatus::Unbounded)
    fail(ErrorCode::InternalError,
         "oracle check cannot confirm an unbounded status");
  const bool both_optimal = status == SolveStatus::Optimal &&
                            ref.status == OracleResult::Status::Optimal;
  const bool both_infeasible = status == SolveStatus::Infeasible &&
                               ref.status == OracleResult::Status::Infeasible;
  require(both_optimal || both_infeasible, ErrorCode::InternalError,
          "oracle disagrees on feasibility");
  if (both_optimal)
    require(sol && sol->value == ref.value, ErrorCode::InternalError,
            "oracle disagrees on the optimal value");
}

int cmd_solve(const std::string& file, const SolveFlags& flags,
              const std::string& out) {
  Problem p = load_problem_file(file);
  if (flags.lp_only) return cmd_lp_only(p, out);

  json rep;
  rep["instance"] = describe(p);
  rep["bounds"] = bounds_json(p);

  if (const auto* inst = std::get_if<Instance>(&p)) {
    SolveOptions opts;
    opts.threads = flags.threads;
    if (flags.max_iter >= 0) opts.max_iterations = BigInt(flags.max_iter);
    if (flags.lambda_max >= 0) opts.lambda_max_exp = flags.lambda_max;
    SolveResult res = solve(*inst, opts);
    rep["status"] = status_name(res.status);
    rep["objective_sense"] =
        is_linear(inst->objective()) ? "maximize" : "minimize";
    if (res.solution) {
      rep["value"] = to_string(res.solution->value);
      rep["solution"] = solution_json(res.solution->x);
    }
    rep["stats"] = stats_json(res.stats, !flags.no_timing);
    if (flags.oracle_check)
      oracle_cross_check(p, res.status, res.solution, flags.box_cap, rep);
    emit(rep, out);
    return status_exit(res.status);
  }

  const auto& tree = std::get<TreeInstance>(p);
  TreeSolveOptions opts;
  opts.threads = flags.threads;
  if (flags.max_iter >= 0) opts.max_iterations = BigInt(flags.max_iter);
  if (flags.lambda_max >= 0) opts.lambda_max_exp = flags.lambda_max;
  TreeSolveResult res = solve_treefold(tree, opts);
  SolveStatus st = SolveStatus::Infeasible;
  if (res.status == TreeSolveStatus::Optimal) st = SolveStatus::Optimal;
  if (res.status == TreeSolveStatus::Unbounded) st = SolveStatus::Unbounded;
  rep["status"] = status_name(st);
  rep["objective_sense"] = "maximize";
  if (res.solution) {
    rep["value"] = to_string(res.solution->value);
    rep["solution"] = solution_json(res.solution->x);
  }
  rep["stats"] = tree_stats_json(res.stats);
  if (flags.oracle_check)
    oracle_cross_check(p, st, res.solution, flags.box_cap, rep);
  emit(rep, out);
  return status_exit(st);
}

int cmd_oracle_solve(const std::string& file, Int box_cap,
                     const std::string& out) {
  Problem p = load_problem_file(file);
  OracleResult ref;
  if (const auto* inst = std::get_if<Instance>(&p)) {
    ref = brute_force_solve(*inst, box_cap);
  } else {
    const auto& tree = std::get<TreeInstance>(p);
    ref = brute_force_solve_dense(assemble_matrix(tree), assemble_rhs(tree),
                                  tree.lower(), tree.upper(),
                                  tree.data().objective, box_cap);
  }
  json rep;
  rep["instance"] = describe(p);
  const bool ok = ref.status == OracleResult::Status::Optimal;
  rep["status"] = ok ? "optimal" : "infeasible";
  if (ok) {
    rep["value"] = to_string(ref.value);
    rep["solution"] = solution_json(ref.x);
  }
  emit(rep, out);
  return ok ? kExitOptimal : kExitInfeasible;
}

int cmd_oracle_graver(const std::string& file, Int cap, Int node_budget,
                      const std::string& out) {
  Problem p = load_problem_file(file);
  IntMatrix m = std::holds_alternative<Instance>(p)
                    ? assemble_matrix(std::get<Instance>(p))
                    : assemble_matrix(std::get<TreeInstance>(p));
  auto graver = enumerate_graver(m, BigInt(cap),
                                 static_cast<std::uint64_t>(node_budget));
  BigInt max_norm = 0;
  json elems = json::array();
  for (const IntVector& g : graver) {
    const BigInt norm = l1_norm(g);
    if (norm > max_norm) max_norm = norm;
    elems.push_back(solution_json(g));
  }
  json rep;
  rep["instance"] = describe(p);
  rep["cap"] = cap;
  rep["count"] = static_cast<Index>(graver.size());
  rep["max_norm"] = to_string(max_norm);
  rep["elements"] = std::move(elems);
  emit(rep, out);
  return kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solver for integer programs with block structure"};
  app.require_subcommand(1);

  auto* validate_cmd =
      app.add_subcommand("validate", "parse and check an instance file");
  std::string validate_file, validate_out;
  validate_cmd->add_option("file", validate_file, "instance file")->required();
  validate_cmd->add_option("-o,--output", validate_out, "write the report here");

  auto* bounds_cmd = app.add_subcommand(
      "bounds", "report norm bounds and search parameters for an instance");
  std::string bounds_file, bounds_out;
  bounds_cmd->add_option("file", bounds_file, "instance file")->required();
  bounds_cmd->add_option("-o,--output", bounds_out, "write the report here");

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance exactly");
  SolveFlags flags;
  std::string solve_file, solve_out;
  solve_cmd->add_option("file", solve_file, "instance file")->required();
  solve_cmd->add_option("-o,--output", solve_out, "write the report here");
  solve_cmd->add_option("--threads", flags.threads,
                        "parallel workers for the step-length sweep");
  solve_cmd->add_option("--max-iter", flags.max_iter,
                        "fail beyond this many augmentation steps");
  solve_cmd->add_option("--lambda-max", flags.lambda_max,
                        "largest step-length exponent to try");
  solve_cmd->add_flag("--lp-only", flags.lp_only,
                      "solve the rational relaxation and stop");
  solve_cmd->add_flag("--oracle-check", flags.oracle_check,
                      "cross-check the result against full enumeration");
  solve_cmd->add_option("--box-cap", flags.box_cap,
                        "largest box volume the oracle check will scan");
  solve_cmd->add_flag("--no-timing", flags.no_timing,
                      "omit timing so reports are byte-identical across runs");

  auto* oracle_cmd =
      app.add_subcommand("oracle", "slow reference computations");
  oracle_cmd->require_subcommand(1);
  auto* oracle_solve_cmd = oracle_cmd->add_subcommand(
      "solve", "optimize by scanning every point of the bound box");
  std::string oracle_solve_file, oracle_solve_out;
  Int oracle_box_cap = kDefaultBoxCap;
  oracle_solve_cmd->add_option("file", oracle_solve_file, "instance file")
      ->required();
  oracle_solve_cmd->add_option("-o,--output", oracle_solve_out,
                               "write the report here");
  oracle_solve_cmd->add_option("--box-cap", oracle_box_cap,
                               "largest box volume to scan");
  auto* oracle_graver_cmd = oracle_cmd->add_subcommand(
      "graver", "enumerate the Graver basis of the full matrix");
  std::string oracle_graver_file, oracle_graver_out;
  Int graver_cap = 0;
  Int graver_budget = static_cast<Int>(kDefaultNodeBudget);
  oracle_graver_cmd->add_option("file", oracle_graver_file, "instance file")
      ->required();
  oracle_graver_cmd->add_option("--cap", graver_cap, "1-norm cap")->required();
  oracle_graver_cmd->add_option("--node-budget", graver_budget,
                                "search node budget");
  oracle_graver_cmd->add_option("-o,--output", oracle_graver_out,
                                "write the report here");

  auto* gen_cmd =
      app.add_subcommand("generate", "write a seeded random instance");
  std::string gen_kind = "nfold", gen_out;
  std::uint64_t gen_seed = 1;
  GenSpec gs;
  TreeGenSpec ts;
  bool gen_convex = false;
  gen_cmd->add_option("--kind", gen_kind, "nfold or treefold")
      ->check(CLI::IsMember({"nfold", "treefold"}));
  gen_cmd->add_option("--seed", gen_seed, "rng seed");
  gen_cmd->add_option("-o,--output", gen_out, "write the instance here");
  gen_cmd->add_option("--n", gs.n, "blocks");
  gen_cmd->add_option("--r", gs.r, "linking rows");
  gen_cmd->add_option("--s", gs.s, "rows per block");
  gen_cmd->add_option("--t", gs.t, "columns per block");
  gen_cmd->add_option("--delta", gs.delta, "largest matrix entry");
  gen_cmd->add_option("--box", gs.box, "bound magnitude");
  gen_cmd->add_option("--cost-max", gs.cost_max, "largest cost coefficient");
  gen_cmd->add_option("--inf-frac", gs.inf_frac,
                      "chance that a bound is infinite");
  bool gen_feasible = true;
  gen_cmd->add_flag("--feasible,!--infeasible", gen_feasible,
                    "build the right side from a point inside the box "
                    "(default) or draw it at random");
  gen_cmd->add_flag("--convex", gen_convex, "separable convex objective");
  gen_cmd->add_option("--mids", ts.mids, "children of the tree root");
  gen_cmd->add_option("--leaves", ts.leaves, "children per middle node");
  gen_cmd->add_option("--mid-leaves", ts.mid_leaves,
                      "per-middle-node leaf counts (overrides --mids/--leaves)");
  gen_cmd->add_option("--cols-per-leaf", ts.cols_per_leaf, "columns per leaf");
  gen_cmd->add_option("--rows-root", ts.rows_root, "rows of the root block");
  gen_cmd->add_option("--rows-mid", ts.rows_mid, "rows per middle block");
  gen_cmd->add_option("--rows-leaf", ts.rows_leaf, "rows per leaf block");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (app.got_subcommand(validate_cmd))
      return cmd_validate(validate_file, validate_out);
    if (app.got_subcommand(bounds_cmd)) return cmd_bounds(bounds_file, bounds_out);
    if (app.got_subcommand(solve_cmd))
      return cmd_solve(solve_file, flags, solve_out);
    if (app.got_subcommand(oracle_cmd)) {
      if (oracle_cmd->got_subcommand(oracle_solve_cmd))
        return cmd_oracle_solve(oracle_solve_file, oracle_box_cap,
                                oracle_solve_out);
      return cmd_oracle_graver(oracle_graver_file, graver_cap, graver_budget,
                               oracle_graver_out);
    }
    if (app.got_subcommand(gen_cmd)) {
      json j;
      if (gen_kind == "nfold") {
        gs.feasible = gen_feasible;
        gs.convex = gen_convex;
        j = to_json(generate_instance(gs, gen_seed));
      } else {
        ts.feasible = gen_feasible;
        ts.delta = gs.delta;
        ts.box = gs.box;
        ts.cost_max = gs.cost_max;
        j = to_json(generate_tree(ts, gen_seed));
      }
      emit(j, gen_out);
      return kExitOptimal;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
