#pragma once

// Schema-driven parsing of delimiter-separated mixed numeric/categorical
// records. Incomplete rows (any field equal to the missing token) are dropped
// and counted; everything else is validated strictly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "topmix/error.hpp"

namespace topmix {

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

inline int to_int(Label l) noexcept { return static_cast<int>(l); }

enum class AttributeKind { Numeric, Categorical };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::Numeric;
  std::vector<std::string> domain;  // categorical only, declared order

  bool operator==(const Attribute&) const = default;
};

// Maps a raw target token to a binary label.
struct PositiveRule {
  enum class Kind { GreaterThan, OneOf };
  Kind kind = Kind::GreaterThan;
  double threshold = 0.0;           // GreaterThan: numeric token > threshold => positive
  std::vector<std::string> tokens;  // OneOf: token in list => positive

  bool operator==(const PositiveRule&) const = default;
};

struct TargetSpec {
  std::string name;
  PositiveRule rule;
  // Zero-based column of the target in the file; unset means after all attributes.
  std::optional<std::size_t> column;

  bool operator==(const TargetSpec&) const = default;
};

struct SchemaSpec {
  std::vector<Attribute> attributes;
  TargetSpec target;
  std::string missing_token = "?";

  bool operator==(const SchemaSpec&) const = default;

  std::size_t field_count() const { return attributes.size() + 1; }
  std::size_t target_column() const { return target.column.value_or(attributes.size()); }

  // Throws SchemaError when an invariant is broken.
  void validate() const {
    std::set<std::string> names;
    for (const auto& a : attributes) {
      if (a.name.empty()) throw SchemaError("attribute with empty name");
      if (!names.insert(a.name).second) throw SchemaError("duplicate attribute name '" + a.name + "'");
      if (a.kind == AttributeKind::Categorical) {
        if (a.domain.empty()) throw SchemaError("categorical attribute '" + a.name + "' has an empty domain");
        std::set<std::string> tokens(a.domain.begin(), a.domain.end());
        if (tokens.size() != a.domain.size())
          throw SchemaError("categorical attribute '" + a.name + "' has duplicate domain tokens");
      } else if (!a.domain.empty()) {
        throw SchemaError("numeric attribute '" + a.name + "' declares a domain");
      }
    }
    if (target.name.empty()) throw SchemaError("target has no name");
    if (names.count(target.name)) throw SchemaError("target '" + target.name + "' is also a predictive attribute");
    if (target.column && *target.column > attributes.size())
      throw SchemaError("target column " + std::to_string(*target.column) + " out of range");
    if (target.rule.kind == PositiveRule::Kind::OneOf && target.rule.tokens.empty())
      throw SchemaError("one_of positive rule needs at least one token");
  }
};

// Numeric fields hold the parsed real, categorical fields the index into the
// attribute's domain.
using RawValue = std::variant<double, std::size_t>;

struct RawRecord {
  std::vector<RawValue> values;  // one per schema attribute, schema order
  Label label = Label::Negative;
  std::size_t source_row = 0;    // zero-based data row in the file
};

struct ParseOptions {
  char delimiter = ',';
  bool header = false;
};

struct ParseReport {
  std::size_t total_rows = 0;
  std::size_t retained_rows = 0;
  std::size_t dropped_rows = 0;
  std::vector<std::size_t> dropped;  // data-row indices of dropped rows
};

struct RawDataset {
  std::vector<RawRecord> rows;
  SchemaSpec schema;
  ParseReport report;

  std::size_t size() const noexcept { return rows.size(); }
  std::vector<Label> labels() const {
    std::vector<Label> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.label);
    return out;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

// Strict real parse: whole token consumed, finite result.
inline std::optional<double> parse_real(std::string_view token) {
  token = detail::trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline Label binarize_target(std::string_view raw_token, const PositiveRule& rule) {
  const auto token = detail::trim(raw_token);
  switch (rule.kind) {
    case PositiveRule::Kind::GreaterThan: {
      const auto v = parse_real(token);
      if (!v) throw ParseError("unparseable target token '" + std::string(token) + "'");
      return *v > rule.threshold ? Label::Positive : Label::Negative;
    }
    case PositiveRule::Kind::OneOf:
      return std::find(rule.tokens.begin(), rule.tokens.end(), token) != rule.tokens.end() ? Label::Positive
                                                                                          : Label::Negative;
  }
  return Label::Negative;
}

inline RawDataset parse_dataset(std::istream& in, const SchemaSpec& schema, const ParseOptions& opts = {}) {
  schema.validate();
  RawDataset out;
  out.schema = schema;

  const std::size_t nfields = schema.field_count();
  const std::size_t tcol = schema.target_column();

  std::string line;
  bool header_pending = opts.header;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const std::size_t this_row = row++;
    const auto fields = detail::split(line, opts.delimiter);
    if (fields.size() != nfields)
      throw ParseError("expected " + std::to_string(nfields) + " fields, found " + std::to_string(fields.size()),
                       this_row);

    const bool incomplete = std::any_of(fields.begin(), fields.end(),
                                        [&](std::string_view f) { return f == schema.missing_token; });
    if (incomplete) {
      out.report.dropped.push_back(this_row);
      continue;
    }

    RawRecord rec;
    rec.source_row = this_row;
    rec.values.reserve(schema.attributes.size());
    std::size_t attr = 0;
    for (std::size_t col = 0; col < nfields; ++col) {
      if (col == tcol) {
        try {
          rec.label = binarize_target(fields[col], schema.target.rule);
        } catch (const ParseError& e) {
          throw ParseError(e.what(), this_row);
        }
        continue;
      }
      const Attribute& a = schema.attributes[attr++];
      if (a.kind == AttributeKind::Numeric) {
        const auto v = parse_real(fields[col]);
        if (!v)
          throw ParseError("attribute '" + a.name + "': not a finite real: '" + std::string(fields[col]) + "'",
                           this_row);
        rec.values.emplace_back(*v);
      } else {
        const auto it = std::find(a.domain.begin(), a.domain.end(), fields[col]);
        if (it == a.domain.end())
          throw SchemaError("row " + std::to_string(this_row) + ": attribute '" + a.name + "': token '" +
                            std::string(fields[col]) + "' outside declared domain");
        rec.values.emplace_back(static_cast<std::size_t>(it - a.domain.begin()));
      }
    }
    out.rows.push_back(std::move(rec));
  }

  out.report.total_rows = row;
  out.report.retained_rows = out.rows.size();
  out.report.dropped_rows = out.report.dropped.size();
  return out;
}

inline RawDataset parse_dataset(std::string_view text, const SchemaSpec& schema, const ParseOptions& opts = {}) {
  std::istringstream in{std::string(text)};
  return parse_dataset(in, schema, opts);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- schema file (JSON) ------------------------------------------------------
//
// {
//   "missing_token": "?",
//   "attributes": [ {"name": "age", "kind": "numeric"},
//                   {"name": "sex", "kind": "categorical", "domain": ["0.0", "1.0"]} ],
//   "target": { "name": "num", "column": 13,
//               "positive_rule": {"kind": "greater_than", "threshold": 0} }
// }
//
// "column" is optional (default: last). The alternative rule is
// {"kind": "one_of", "tokens": [...]}.

inline nlohmann::json schema_to_json(const SchemaSpec& s) {
  nlohmann::json j;
  j["missing_token"] = s.missing_token;
  j["attributes"] = nlohmann::json::array();
  for (const auto& a : s.attributes) {
    nlohmann::json ja{{"name", a.name}, {"kind", a.kind == AttributeKind::Numeric ? "numeric" : "categorical"}};
    if (a.kind == AttributeKind::Categorical) ja["domain"] = a.domain;
    j["attributes"].push_back(std::move(ja));
  }
  nlohmann::json rule;
  if (s.target.rule.kind == PositiveRule::Kind::GreaterThan) {
    rule = {{"kind", "greater_than"}, {"threshold", s.target.rule.threshold}};
  } else {
    rule = {{"kind", "one_of"}, {"tokens", s.target.rule.tokens}};
  }
  j["target"] = {{"name", s.target.name}, {"positive_rule", rule}};
  if (s.target.column) j["target"]["column"] = *s.target.column;
  return j;
}

inline SchemaSpec schema_from_json(const nlohmann::json& j) {
  SchemaSpec s;
  try {
    s.missing_token = j.value("missing_token", std::string("?"));
    for (const auto& ja : j.at("attributes")) {
      Attribute a;
      a.name = ja.at("name").get<std::string>();
      const auto kind = ja.at("kind").get<std::string>();
      if (kind == "numeric") {
        a.kind = AttributeKind::Numeric;
      } else if (kind == "categorical") {
        a.kind = AttributeKind::Categorical;
        a.domain = ja.at("domain").get<std::vector<std::string>>();
      } else {
        throw SchemaError("attribute '" + a.name + "': unknown kind '" + kind + "'");
      }
      s.attributes.push_back(std::move(a));
    }
    const auto& jt = j.at("target");
    s.target.name = jt.at("name").get<std::string>();
    if (jt.contains("column")) s.target.column = jt.at("column").get<std::size_t>();
    const auto& jr = jt.at("positive_rule");
    const auto rk = jr.at("kind").get<std::string>();
    if (rk == "greater_than") {
      s.target.rule.kind = PositiveRule::Kind::GreaterThan;
      s.target.rule.threshold = jr.at("threshold").get<double>();
    } else if (rk == "one_of") {
      s.target.rule.kind = PositiveRule::Kind::OneOf;
      s.target.rule.tokens = jr.at("tokens").get<std::vector<std::string>>();
    } else {
      throw SchemaError("unknown positive_rule kind '" + rk + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("schema file: ") + e.what());
  }
  s.validate();
  return s;
}

inline SchemaSpec load_schema(const std::string& path) {
  const auto text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
  return schema_from_json(j);
}

}  // namespace topmix
