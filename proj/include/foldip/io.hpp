// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "foldip/instance.hpp"
#include "foldip/treefold.hpp"

namespace foldip {

using json = nlohmann::json;

// File format: a single JSON object with "version": 1 and "kind" of either
// "nfold" or "treefold".  Unknown keys are rejected so typos fail loudly.
// Bounds are integers or the strings "-inf" / "inf".

InstanceData parse_nfold(const json& j);
TreeData parse_treefold(const json& j);

json to_json(const Instance& inst);
json to_json(const TreeInstance& inst);

// Canonical text: sorted keys, two-space indent, trailing newline.  Parsing
// and re-serializing canonical text is byte-identical.
std::string canonical_text(const json& j);

// FNV-1a 64-bit over the canonical text, as 16 hex digits.
std::string digest_hex(const std::string& text);

using Problem = std::variant<Instance, TreeInstance>;

Problem parse_problem_text(const std::string& text);
Problem load_problem_file(const std::string& path);

std::string problem_digest(const Problem& p);

}  // namespace foldip
