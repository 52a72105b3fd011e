#include "shiftlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace shiftlab::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

void require_keys(const ordered_json& j, const std::vector<std::string>& allowed,
                  const std::vector<std::string>& required, const std::string& what) {
  if (!j.is_object()) bad(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const std::string& a : allowed) known = known || key == a;
    if (!known) bad(what + ": unknown key \"" + key + "\"");
  }
  for (const std::string& r : required) {
    if (!j.contains(r)) bad(what + ": missing key \"" + r + "\"");
  }
}

double number_field(const ordered_json& j, const std::string& key, const std::string& what) {
  const auto& v = j.at(key);
  if (!v.is_number()) bad(what + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::string string_field(const ordered_json& j, const std::string& key, const std::string& what) {
  const auto& v = j.at(key);
  if (!v.is_string()) bad(what + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Side parse_side(const std::string& text) {
  if (text == "unilateral") return Side::Unilateral;
  if (text == "bilateral") return Side::Bilateral;
  bad("side must be \"unilateral\" or \"bilateral\", got \"" + text + "\"");
}

std::int64_t parse_index(const std::string& text, const std::string& what) {
  std::int64_t out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad(what + ": bad integer index \"" + text + "\"");
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double out = std::stod(text, &used);
    if (used != text.size()) bad(what + ": bad number \"" + text + "\"");
    return out;
  } catch (const std::invalid_argument&) {
    bad(what + ": bad number \"" + text + "\"");
  } catch (const std::out_of_range&) {
    bad(what + ": number out of range \"" + text + "\"");
  }
}

ordered_json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(what + ": invalid JSON (" + e.what() + ")");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, sep)) out.push_back(piece);
  if (!text.empty() && text.back() == sep) out.push_back("");
  return out;
}

}  // namespace

WeightSpec weight_spec_from_json(const ordered_json& j) {
  const std::string what = "weight spec";
  if (!j.is_object() || !j.contains("kind")) bad(what + ": missing \"kind\"");
  const std::string kind = string_field(j, "kind", what);
  if (kind == "paper_blocks") {
    require_keys(j, {"kind"}, {"kind"}, what);
    return WeightSpec::paper_blocks();
  }
  if (kind == "rolewicz") {
    require_keys(j, {"kind", "lambda"}, {"kind", "lambda"}, what);
    return WeightSpec::rolewicz(number_field(j, "lambda", what));
  }
  if (kind == "constant") {
    require_keys(j, {"kind", "lambda", "side"}, {"kind", "lambda", "side"}, what);
    return WeightSpec::constant(number_field(j, "lambda", what),
                                parse_side(string_field(j, "side", what)));
  }
  if (kind == "ratio_power") {
    require_keys(j, {"kind", "p"}, {"kind", "p"}, what);
    return WeightSpec::ratio_power(number_field(j, "p", what));
  }
  if (kind == "table") {
    require_keys(j, {"kind", "entries", "default", "side"}, {"kind", "entries", "default", "side"},
                 what);
    const auto& entries_json = j.at("entries");
    if (!entries_json.is_object()) bad(what + ": \"entries\" must be an object");
    std::map<std::int64_t, double> entries;
    for (const auto& [key, value] : entries_json.items()) {
      if (!value.is_number()) bad(what + ": entry \"" + key + "\" must be a number");
      entries[parse_index(key, what)] = value.get<double>();
    }
    return WeightSpec::table(std::move(entries), number_field(j, "default", what),
                             parse_side(string_field(j, "side", what)));
  }
  bad(what + ": unknown kind \"" + kind + "\"");
}

ordered_json weight_spec_to_json(const WeightSpec& spec) {
  ordered_json out;
  switch (spec.kind()) {
    case WeightSpec::Kind::PaperBlocks:
      out["kind"] = "paper_blocks";
      return out;
    case WeightSpec::Kind::Rolewicz:
      out["kind"] = "rolewicz";
      out["lambda"] = spec.parameter();
      return out;
    case WeightSpec::Kind::Constant:
      out["kind"] = "constant";
      out["lambda"] = spec.parameter();
      out["side"] = to_string(spec.side());
      return out;
    case WeightSpec::Kind::RatioPower:
      out["kind"] = "ratio_power";
      out["p"] = spec.parameter();
      return out;
    case WeightSpec::Kind::Table: {
      out["kind"] = "table";
      ordered_json entries = ordered_json::object();
      for (const auto& [j, v] : spec.table_entries()) entries[std::to_string(j)] = v;
      out["entries"] = std::move(entries);
      out["default"] = spec.table_default();
      out["side"] = to_string(spec.side());
      return out;
    }
    case WeightSpec::Kind::ProductProfileDyadic: {
      // Lowered to the equivalent table of exact powers of two so every
      // constructible spec round-trips through the file schema.
      out["kind"] = "table";
      ordered_json entries = ordered_json::object();
      for (const auto& [j, e] : spec.profile_exponents()) {
        entries[std::to_string(j)] = std::ldexp(1.0, static_cast<int>(e));
      }
      out["entries"] = std::move(entries);
      out["default"] = 1.0;
      out["side"] = to_string(spec.side());
      return out;
    }
  }
  throw Error("unreachable weight kind");
}

WeightSpec parse_weight_spec_text(const std::string& text) {
  return weight_spec_from_json(parse_json_text(text, "weight spec"));
}

WeightSpec parse_operator_designation(const std::string& text) {
  const std::string what = "operator designation";
  if (text.empty()) bad(what + " must not be empty");
  if (text[0] == '@') return parse_weight_spec_text(read_file(text.substr(1)));
  if (text == "paper-blocks") return WeightSpec::paper_blocks();
  const std::vector<std::string> parts = split(text, ':');
  if (parts[0] == "rolewicz" && parts.size() == 2) {
    return WeightSpec::rolewicz(parse_real(parts[1], what));
  }
  if (parts[0] == "ratio-power" && parts.size() == 2) {
    return WeightSpec::ratio_power(parse_real(parts[1], what));
  }
  if (parts[0] == "constant" && parts.size() == 3) {
    return WeightSpec::constant(parse_real(parts[1], what), parse_side(parts[2]));
  }
  bad(what + " \"" + text +
      "\" not recognized (expected paper-blocks | rolewicz:<lambda> | ratio-power:<p> | "
      "constant:<lambda>:<side> | @<file>)");
}

SupportedVector vector_from_json(const ordered_json& j) {
  const std::string what = "vector";
  require_keys(j, {"side", "entries"}, {"side", "entries"}, what);
  const Side side = parse_side(string_field(j, "side", what));
  const auto& entries_json = j.at("entries");
  if (!entries_json.is_object()) bad(what + ": \"entries\" must be an object");
  SupportedVector out(side);
  for (const auto& [key, value] : entries_json.items()) {
    if (!value.is_number()) bad(what + ": entry \"" + key + "\" must be a number");
    out.set(parse_index(key, what), value.get<double>());
  }
  return out;
}

ordered_json vector_to_json(const SupportedVector& v) {
  ordered_json out;
  out["side"] = to_string(v.side());
  ordered_json entries = ordered_json::object();
  for (const auto& [j, c] : v.entries()) entries[std::to_string(j)] = c;
  out["entries"] = std::move(entries);
  return out;
}

SupportedVector parse_vector_designation(const std::string& text, Side side) {
  const std::string what = "vector designation";
  if (text.empty()) bad(what + " must not be empty");
  SupportedVector out(side);
  if (text[0] == 'e') {
    out.set(parse_index(text.substr(1), what), 1.0);
    return out;
  }
  if (text[0] == '@') {
    out = vector_from_json(parse_json_text(read_file(text.substr(1)), what));
  } else if (text[0] == '{') {
    out = vector_from_json(parse_json_text(text, what));
  } else {
    bad(what + " \"" + text + "\" not recognized (expected e<j> | {json} | @<file>)");
  }
  if (out.side() != side) {
    throw DomainError(what + ": vector side " + to_string(out.side()) +
                      " does not match the operator side " + to_string(side));
  }
  return out;
}

SpaceTag parse_space(const std::string& text) {
  if (text == "l1") return SpaceTag::l1();
  if (text == "l2") return SpaceTag::l2();
  if (text == "c0") return SpaceTag::c0();
  if (text.rfind("lp:", 0) == 0) return SpaceTag::lp(parse_real(text.substr(3), "space"));
  bad("space \"" + text + "\" not recognized (expected l1 | l2 | lp:<p> | c0)");
}

std::string space_to_string(const SpaceTag& space) {
  if (space.kind == SpaceTag::Kind::C0) return "c0";
  if (space.p == 1.0) return "l1";
  if (space.p == 2.0) return "l2";
  return "lp:" + format_number(space.p);
}

std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read file \"" + path + "\"");
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

}  // namespace shiftlab::io
