#pragma once

// A restricted block-style YAML: mappings, sequences (including the compact
// `- key: value` and `- - item` forms), plain and double-quoted single-line
// scalars, and full-line `#` comments. No flow syntax, anchors, tags, or
// block scalars. Indentation step is two spaces.
//
// The reader is deliberately permissive about indentation: a line that does
// not fit the block it appears in is attached to the nearest enclosing block
// that can take it, without any diagnostic. Only three things are errors:
// tab characters in indentation, a double-quoted scalar not closed on its
// line, and a sequence item placed under a scalar value.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/diagnostic.hpp"
#include "forge/json.hpp"

namespace forge::yaml {

enum class NodeKind { Null, Mapping, Sequence, Scalar };

struct Node {
  NodeKind kind = NodeKind::Null;
  std::string text;  // Scalar only
  bool quoted = false;
  std::vector<std::pair<std::string, Node>> entries;  // Mapping
  std::vector<Node> items;                            // Sequence

  friend bool operator==(const Node&, const Node&) = default;
};

struct ParseResult {
  std::optional<Node> root;
  std::vector<Diagnostic> diagnostics;  // YAML_SYNTAX errors only
};

ParseResult parse(std::string_view text);

/// Plain scalars `null`/`~`/empty become null, `true`/`false` booleans and
/// integer literals numbers; everything else is a string.
json::Value to_json(const Node& node);

/// Block YAML mirroring a JSON value. Empty arrays and objects are omitted
/// from mappings and written as a bare `-` inside sequences.
std::string print(const json::Value& value);

}  // namespace forge::yaml
