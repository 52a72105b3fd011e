#pragma once

#include <string>

#include "json.hpp"
#include "shiftlab/seqcore.hpp"
#include "shiftlab/vectors.hpp"

namespace shiftlab::io {

using ordered_json = nlohmann::ordered_json;

// Weight-spec file schema (unknown keys rejected):
//   {"kind": "paper_blocks"}
//   {"kind": "rolewicz", "lambda": 2.0}
//   {"kind": "constant", "lambda": 1.0, "side": "bilateral"}
//   {"kind": "ratio_power", "p": 2.0}
//   {"kind": "table", "entries": {"-3": 0.5, ...}, "default": 1.0, "side": "bilateral"}
WeightSpec weight_spec_from_json(const ordered_json& j);
// Inverse of the above; dyadic-exponent specs lower to an equivalent table.
ordered_json weight_spec_to_json(const WeightSpec& spec);
WeightSpec parse_weight_spec_text(const std::string& text);

// CLI operator designations: paper-blocks | rolewicz:<lambda> |
// ratio-power:<p> | constant:<lambda>:<side> | @<path to weight-spec file>.
WeightSpec parse_operator_designation(const std::string& text);

// Vector schema: {"side": "bilateral", "entries": {"0": 1.0, ...}}; the CLI
// additionally accepts basis shorthands e<j> (side taken from the operator)
// and @<path>. Unknown keys rejected.
SupportedVector vector_from_json(const ordered_json& j);
ordered_json vector_to_json(const SupportedVector& v);
SupportedVector parse_vector_designation(const std::string& text, Side side);

// l1 | l2 | lp:<p> | c0.
SpaceTag parse_space(const std::string& text);
std::string space_to_string(const SpaceTag& space);

// 17 significant digits (round-trip safe).
std::string format_number(double v);

std::string read_file(const std::string& path);  // ConfigError on failure

}  // namespace shiftlab::io
