#pragma once

// Conversions between IntentDoc and JSON, the YAML subset, and Markdown.
//
// JSON schema (key order fixed, optional keys omitted when absent):
//
//   {"intent": NAME,
//    "design_constraints": [FORM, ...],
//    "pillars": [{"name", "purpose"?, "components": [
//        {"name", "role"?, "invariants"?, "data_flow"?,
//         "symbols": [{"kind", "name", "sig"?, "extra"?}],
//         "symbols_extra"?, "extra"?}], "extra"?}],
//    "extra"?}
//
// FORM is an S-expression as nested arrays. An atom is written as its
// S-expression spelling: a symbol as its text (or a JSON number when it is an
// integer literal), a string as its quoted form, e.g. "\"SOLE DB gateway\"".

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/diagnostic.hpp"
#include "forge/intent.hpp"
#include "forge/json.hpp"

namespace forge::bridge {

using intent::IntentDoc;

enum class Format { Sexpr, Json, Yaml, Markdown };

std::string_view format_name(Format format);
std::optional<Format> parse_format(std::string_view name);
/// By extension: .lisp/.sexp/.scm → Sexpr, .json, .yaml/.yml, .md.
std::optional<Format> format_from_path(std::string_view path);

struct ConvertResult {
  std::optional<IntentDoc> doc;
  std::vector<Diagnostic> diagnostics;
};

json::Value to_json_value(const IntentDoc& doc);
std::string to_json(const IntentDoc& doc);
/// Strict: any syntax or schema error yields no document.
ConvertResult from_json(std::string_view text);

std::string to_yaml(const IntentDoc& doc);
/// Fails only on YAML_SYNTAX. Values that do not fit the schema are dropped
/// without a diagnostic, as a typed loader ignoring unknown fields would.
ConvertResult from_yaml(std::string_view text);

/// Headings: `#` project, `##` pillar, `###` component. Bullets carry
/// constraints, symbols and extra forms; `Key: value` lines carry attributes.
/// Constraint and extra forms keep two levels of nesting; deeper lists are
/// flattened into their parent.
std::string to_markdown(const IntentDoc& doc);
/// Never reports anything. Unrecognized lines are dropped.
ConvertResult from_markdown(std::string_view text);

std::string to_format(const IntentDoc& doc, Format format);

/// Sexpr input is parsed in `mode` and built; a strict parse failure yields no
/// document.
ConvertResult from_format(std::string_view text, Format format,
                          sexpr::ParseMode mode = sexpr::ParseMode::Strict);

/// One classified Markdown line.
struct MarkdownLine {
  enum class Kind { Heading1, Heading2, Heading3, Heading4, Bullet, Text } kind;
  int indent = 0;  // leading spaces before a bullet marker
  std::string text;
};

/// Blank lines are skipped; headings of level five and deeper are Text.
std::vector<MarkdownLine> split_markdown(std::string_view text);

}  // namespace forge::bridge
