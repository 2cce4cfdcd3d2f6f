// SPDX-License-Identifier: Apache-2.0
#include "foldip/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace foldip {

namespace {

void check_keys(const json& j, const std::vector<std::string>& keys,
                const std::string& what) {
  require(j.is_object(), ErrorCode::ParseError, what + " must be an object");
  for (const std::string& k : keys)
    require(j.contains(k), ErrorCode::ParseError, what + " is missing \"" + k + "\"");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const std::string& k : keys)
      if (item.key() == k) {
        known = true;
        break;
      }
    require(known, ErrorCode::ParseError,
            what + " has unknown key \"" + item.key() + "\"");
  }
}

Int get_int(const json& v, const std::string& where) {
  require(v.is_number_integer(), ErrorCode::ParseError,
          where + ": expected an integer");
  if (v.is_number_unsigned()) {
    std::uint64_t u = v.get<std::uint64_t>();
    require(u <= static_cast<std::uint64_t>(std::numeric_limits<Int>::max()),
            ErrorCode::ParseError, where + ": integer out of range");
    return static_cast<Int>(u);
  }
  return v.get<Int>();
}

Index get_dim(const json& v, const std::string& where) {
  Int d = get_int(v, where);
  require(d >= 1, ErrorCode::ParseError, where + ": must be at least 1");
  return static_cast<Index>(d);
}

IntVector parse_ivec(const json& v, const std::string& where) {
  require(v.is_array(), ErrorCode::ParseError, where + ": expected an array");
  IntVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Index>(i)] = get_int(v[i], where);
  return out;
}

IntMatrix parse_matrix(const json& v, const std::string& where) {
  require(v.is_array() && !v.empty(), ErrorCode::ParseError,
          where + ": expected a nonempty array of rows");
  const Index rows = static_cast<Index>(v.size());
  require(v[0].is_array(), ErrorCode::ParseError, where + ": rows must be arrays");
  const Index cols = static_cast<Index>(v[0].size());
  IntMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Index>(row.size()) == cols,
            ErrorCode::ParseError, where + ": ragged matrix rows");
    for (Index q = 0; q < cols; ++q)
      m(i, q) = get_int(row[static_cast<std::size_t>(q)], where);
  }
  return m;
}

Bound parse_bound(const json& v, const std::string& where) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf") return Bound::neg_inf();
    if (s == "inf") return Bound::pos_inf();
    fail(ErrorCode::ParseError, where + ": bound string must be \"-inf\" or \"inf\"");
  }
  return Bound::finite(get_int(v, where));
}

BoundVec parse_bounds(const json& v, const std::string& where) {
  require(v.is_array(), ErrorCode::ParseError, where + ": expected an array");
  BoundVec out;
  out.reserve(v.size());
  for (const json& e : v) out.push_back(parse_bound(e, where));
  return out;
}

ConvexTerm parse_term(const json& v) {
  require(v.is_object() && v.size() == 1, ErrorCode::ParseError,
          "convex term must be an object with one key");
  auto it = v.begin();
  const std::string key = it.key();
  const json& val = it.value();
  if (key == "lin") {
    require(val.is_array() && val.size() == 1, ErrorCode::ParseError,
            "\"lin\" takes [a]");
    return LinearTerm{get_int(val[0], "lin")};
  }
  if (key == "quad") {
    require(val.is_array() && val.size() == 3, ErrorCode::ParseError,
            "\"quad\" takes [a, b, c]");
    return QuadraticTerm{get_int(val[0], "quad"), get_int(val[1], "quad"),
                         get_int(val[2], "quad")};
  }
  if (key == "abs") {
    require(val.is_array() && val.size() == 2, ErrorCode::ParseError,
            "\"abs\" takes [weight, center]");
    return AbsTerm{get_int(val[0], "abs"), get_int(val[1], "abs")};
  }
  if (key == "pwl") {
    check_keys(val, {"breaks", "slopes"}, "\"pwl\"");
    PwlTerm t;
    IntVector breaks = parse_ivec(val["breaks"], "pwl breaks");
    IntVector slopes = parse_ivec(val["slopes"], "pwl slopes");
    t.breaks.assign(breaks.data(), breaks.data() + breaks.size());
    t.slopes.assign(slopes.data(), slopes.data() + slopes.size());
    return t;
  }
  fail(ErrorCode::ParseError, "unknown convex term \"" + key + "\"");
}

Objective parse_objective(const json& v) {
  require(v.is_object() && v.size() == 1, ErrorCode::ParseError,
          "objective must have exactly one of \"linear\" or \"convex\"");
  if (v.contains("linear"))
    return LinearObjective{parse_ivec(v["linear"], "objective")};
  if (v.contains("convex")) {
    const json& terms = v["convex"];
    require(terms.is_array(), ErrorCode::ParseError,
            "\"convex\" must be an array of terms");
    ConvexObjective obj;
    for (const json& t : terms) obj.terms.push_back(parse_term(t));
    return obj;
  }
  fail(ErrorCode::ParseError, "objective must have \"linear\" or \"convex\"");
}

json bound_to_json(const Bound& b) {
  if (b.is_neg_inf()) return "-inf";
  if (b.is_pos_inf()) return "inf";
  return b.value();
}

json bounds_to_json(const BoundVec& bs) {
  json a = json::array();
  for (const Bound& b : bs) a.push_back(bound_to_json(b));
  return a;
}

json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index q = 0; q < m.cols(); ++q) row.push_back(m(i, q));
    rows.push_back(row);
  }
  return rows;
}

json ivec_to_json(const IntVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json objective_to_json(const Objective& obj) {
  return std::visit(
      [](const auto& o) -> json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, LinearObjective>) {
          return json{{"linear", ivec_to_json(o.c)}};
        } else {
          json terms = json::array();
          for (const ConvexTerm& term : o.terms) {
            std::visit(
                [&](const auto& t) {
                  using U = std::decay_t<decltype(t)>;
                  if constexpr (std::is_same_v<U, LinearTerm>)
                    terms.push_back(json{{"lin", {t.a}}});
                  else if constexpr (std::is_same_v<U, QuadraticTerm>)
                    terms.push_back(json{{"quad", {t.a, t.b, t.c}}});
                  else if constexpr (std::is_same_v<U, AbsTerm>)
                    terms.push_back(json{{"abs", {t.weight, t.center}}});
                  else
                    terms.push_back(json{
                        {"pwl", {{"breaks", t.breaks}, {"slopes", t.slopes}}}});
                },
                term);
          }
          return json{{"convex", terms}};
        }
      },
      obj);
}

}  // namespace

InstanceData parse_nfold(const json& j) {
  check_keys(j, {"version", "kind", "n", "r", "s", "t", "A", "B", "b", "l", "u",
                 "objective"},
             "instance");
  require(get_int(j["version"], "version") == 1, ErrorCode::ParseError,
          "unsupported version");
  require(j["kind"] == "nfold", ErrorCode::ParseError, "kind must be \"nfold\"");

  InstanceData d;
  d.n = get_dim(j["n"], "n");
  d.r = get_dim(j["r"], "r");
  d.s = get_dim(j["s"], "s");
  d.t = get_dim(j["t"], "t");

  const json& a = j["A"];
  const json& b = j["B"];
  require(a.is_array() && static_cast<Index>(a.size()) == d.n,
          ErrorCode::ParseError, "\"A\" must list n blocks");
  require(b.is_array() && static_cast<Index>(b.size()) == d.n,
          ErrorCode::ParseError, "\"B\" must list n blocks");
  for (Index i = 0; i < d.n; ++i) {
    d.top_blocks.push_back(parse_matrix(a[static_cast<std::size_t>(i)], "A"));
    d.diag_blocks.push_back(parse_matrix(b[static_cast<std::size_t>(i)], "B"));
  }
  d.rhs = parse_ivec(j["b"], "b");
  d.lower = parse_bounds(j["l"], "l");
  d.upper = parse_bounds(j["u"], "u");
  d.objective = parse_objective(j["objective"]);
  return d;
}

TreeData parse_treefold(const json& j) {
  check_keys(j, {"version", "kind", "n", "blocks", "l", "u", "objective"},
             "instance");
  require(get_int(j["version"], "version") == 1, ErrorCode::ParseError,
          "unsupported version");
  require(j["kind"] == "treefold", ErrorCode::ParseError,
          "kind must be \"treefold\"");

  TreeData d;
  d.num_cols = get_dim(j["n"], "n");
  const json& blocks = j["blocks"];
  require(blocks.is_array() && !blocks.empty(), ErrorCode::ParseError,
          "\"blocks\" must be a nonempty array");
  for (const json& blk : blocks) {
    check_keys(blk, {"rows", "matrix", "rhs"}, "block");
    TreeBlockData tb;
    tb.matrix = parse_matrix(blk["matrix"], "block matrix");
    tb.rhs = parse_ivec(blk["rhs"], "block rhs");
    Index rows = get_dim(blk["rows"], "rows");
    require(tb.matrix.rows() == rows && tb.rhs.size() == rows,
            ErrorCode::ParseError, "block shape disagrees with \"rows\"");
    d.blocks.push_back(std::move(tb));
  }
  d.lower = parse_bounds(j["l"], "l");
  d.upper = parse_bounds(j["u"], "u");
  d.objective = parse_objective(j["objective"]);
  return d;
}

json to_json(const Instance& inst) {
  json a = json::array(), b = json::array();
  for (Index i = 0; i < inst.n(); ++i) {
    a.push_back(matrix_to_json(inst.top_block(i)));
    b.push_back(matrix_to_json(inst.diag_block(i)));
  }
  return json{{"version", 1},
              {"kind", "nfold"},
              {"n", inst.n()},
              {"r", inst.r()},
              {"s", inst.s()},
              {"t", inst.t()},
              {"A", a},
              {"B", b},
              {"b", ivec_to_json(inst.rhs())},
              {"l", bounds_to_json(inst.lower())},
              {"u", bounds_to_json(inst.upper())},
              {"objective", objective_to_json(inst.objective())}};
}

json to_json(const TreeInstance& inst) {
  json blocks = json::array();
  for (const TreeBlockData& blk : inst.data().blocks)
    blocks.push_back(json{{"rows", blk.matrix.rows()},
                          {"matrix", matrix_to_json(blk.matrix)},
                          {"rhs", ivec_to_json(blk.rhs)}});
  return json{{"version", 1},
              {"kind", "treefold"},
              {"n", inst.num_cols()},
              {"blocks", blocks},
              {"l", bounds_to_json(inst.lower())},
              {"u", bounds_to_json(inst.upper())},
              {"objective", objective_to_json(inst.data().objective)}};
}

std::string canonical_text(const json& j) { return j.dump(2) + "\n"; }

std::string digest_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hexd = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hexd[h & 0xf];
    h >>= 4;
  }
  return out;
}

Problem parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  require(j.is_object() && j.contains("kind"), ErrorCode::ParseError,
          "expected an object with a \"kind\"");
  if (j["kind"] == "treefold") return TreeInstance::validate(parse_treefold(j));
  return Instance::validate(parse_nfold(j));
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

std::string problem_digest(const Problem& p) {
  return std::visit(
      [](const auto& inst) { return digest_hex(canonical_text(to_json(inst))); },
      p);
}

}  // namespace foldip
