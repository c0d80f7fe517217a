#include "forge/yaml.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace forge::yaml {

namespace {

struct SyntaxError {
  SourceSpan span;
  std::string message;
};

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return trim_right(s);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Parses a double-quoted scalar at the start of `s`. Returns nullopt if the
// closing quote is missing.
std::optional<std::string> read_quoted(std::string_view s) {
  std::string out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') return out;
    if (c != '\\' || i + 1 >= s.size()) {
      out += c;
      continue;
    }
    const char e = s[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case 'u': {
        unsigned cp = 0;
        bool ok = i + 4 < s.size();
        for (std::size_t k = 1; ok && k <= 4; ++k) {
          const int d = hex_digit(s[i + k]);
          ok = d >= 0;
          cp = (cp << 4) | static_cast<unsigned>(std::max(d, 0));
        }
        if (ok) {
          append_utf8(out, cp);
          i += 4;
        } else {
          out += 'u';
        }
        break;
      }
      default: out += e;  // \" \\ \/ and anything else: the character itself
    }
  }
  return std::nullopt;
}

// Offset of the key separator in a plain line, if the line is `key: value` or
// `key:`.
std::optional<std::size_t> key_separator(std::string_view c) {
  if (c.empty() || c.front() == '"' || c.front() == '#') return std::nullopt;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == ':' && (i + 1 == c.size() || c[i + 1] == ' ')) {
      if (i == 0) return std::nullopt;
      return i;
    }
  }
  return std::nullopt;
}

bool is_item(std::string_view c) { return c == "-" || c.substr(0, 2) == "- "; }

class Reader {
 public:
  ParseResult run(std::string_view text) {
    ParseResult result;
    try {
      std::size_t pos = 0;
      int line_no = 0;
      while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        ++line_no;
        line_begin_ = pos;
        handle_physical(text.substr(pos, eol - pos), line_no);
        if (eol == text.size()) break;
        pos = eol + 1;
      }
    } catch (const SyntaxError& e) {
      result.diagnostics.push_back(make_error(DiagCode::YamlSyntax, e.span, e.message));
      return result;
    }
    result.root = std::move(root_);
    return result;
  }

 private:
  struct Frame {
    Node* node;
    int indent;
    bool last_scalar = false;
  };
  struct Pending {
    Node* slot = nullptr;
    int owner = 0;
    bool from_key = false;
  };

  [[noreturn]] void fail(int col, std::string message) const {
    SourceSpan s;
    s.start_line = s.end_line = line_no_;
    s.start_col = col + 1;
    s.end_col = col + 2;
    s.begin = line_begin_ + static_cast<std::size_t>(col);
    s.end = s.begin + 1;
    throw SyntaxError{s, std::move(message)};
  }

  void handle_physical(std::string_view raw, int line_no) {
    line_no_ = line_no;
    std::size_t indent = 0;
    while (indent < raw.size() && (raw[indent] == ' ' || raw[indent] == '\t')) {
      if (raw[indent] == '\t' && !trim(raw.substr(indent)).empty()) {
        fail(static_cast<int>(indent), "tab character in indentation");
      }
      ++indent;
    }
    const std::string_view content = trim_right(raw.substr(indent));
    if (content.empty() || content.front() == '#') return;
    if (!started_) {
      started_ = true;
      if (is_item(content)) {
        root_.kind = NodeKind::Sequence;
      } else if (key_separator(content)) {
        root_.kind = NodeKind::Mapping;
      } else {
        root_ = scalar(content, static_cast<int>(indent));
        frozen_ = true;
        return;
      }
      frames_.push_back({&root_, static_cast<int>(indent)});
    }
    if (frozen_) return;
    process(static_cast<int>(indent), content);
  }

  Node scalar(std::string_view v, int col) const {
    Node n;
    n.kind = NodeKind::Scalar;
    if (!v.empty() && v.front() == '"') {
      auto q = read_quoted(v);
      if (!q) fail(col, "unterminated quoted scalar");
      n.text = std::move(*q);
      n.quoted = true;
      return n;
    }
    if (auto hash = v.find(" #"); hash != std::string_view::npos) v = v.substr(0, hash);
    n.text = std::string(trim(v));
    if (n.text.empty()) n.kind = NodeKind::Null;
    return n;
  }

  void pop_above(int n) {
    while (frames_.size() > 1 && frames_.back().indent > n) frames_.pop_back();
  }

  // Index of the nearest frame (from the top) of `kind`, or -1.
  int nearest(NodeKind kind) const {
    for (int k = static_cast<int>(frames_.size()) - 1; k >= 0; --k) {
      if (frames_[static_cast<std::size_t>(k)].node->kind == kind) return k;
    }
    return -1;
  }

  void process(int n, std::string_view c) {
    if (is_item(c)) {
      item_line(n, c);
    } else if (auto sep = key_separator(c)) {
      key_line(n, trim(c.substr(0, *sep)), trim(c.substr(*sep + 1)), n + static_cast<int>(*sep) + 1);
    } else {
      scalar_line(n, c);
    }
  }

  void item_line(int n, std::string_view c) {
    Node* seq = nullptr;
    if (pending_.slot && (n > pending_.owner || (pending_.from_key && n == pending_.owner))) {
      pending_.slot->kind = NodeKind::Sequence;
      frames_.push_back({pending_.slot, n});
      seq = pending_.slot;
      pending_ = {};
    } else {
      pending_ = {};
      pop_above(n);
      const Frame& top = frames_.back();
      if (top.node->kind == NodeKind::Mapping && top.last_scalar && n > top.indent) {
        fail(n, "sequence item under a scalar value");
      }
      const int k = nearest(NodeKind::Sequence);
      if (k < 0) {
        const int m = nearest(NodeKind::Mapping);
        if (m >= 0 && frames_[static_cast<std::size_t>(m)].last_scalar) fail(n, "sequence item under a scalar value");
        return;
      }
      frames_.resize(static_cast<std::size_t>(k) + 1);
      seq = frames_.back().node;
    }
    seq->items.emplace_back();
    Node* item = &seq->items.back();
    frames_.back().last_scalar = false;
    pending_ = {item, n, false};
    if (c.size() > 2) {
      std::string_view rest = c.substr(2);
      int col = n + 2;
      while (!rest.empty() && rest.front() == ' ') {
        rest.remove_prefix(1);
        ++col;
      }
      if (!rest.empty()) process(col, rest);
    }
  }

  void key_line(int n, std::string_view key, std::string_view value, int value_col) {
    if (pending_.slot && n > pending_.owner) {
      pending_.slot->kind = NodeKind::Mapping;
      frames_.push_back({pending_.slot, n});
      pending_ = {};
    } else {
      pending_ = {};
      pop_above(n);
      const int k = nearest(NodeKind::Mapping);
      if (k < 0) return;
      frames_.resize(static_cast<std::size_t>(k) + 1);
    }
    Frame& frame = frames_.back();
    auto& entries = frame.node->entries;
    auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
    Node* slot;
    if (it != entries.end()) {
      it->second = Node{};
      slot = &it->second;
    } else {
      entries.emplace_back(std::string(key), Node{});
      slot = &entries.back().second;
    }
    if (value.empty()) {
      frame.last_scalar = false;
      pending_ = {slot, n, true};
    } else {
      *slot = scalar(value, value_col);
      frame.last_scalar = true;
    }
  }

  void scalar_line(int n, std::string_view c) {
    if (pending_.slot && n > pending_.owner) {
      *pending_.slot = scalar(c, n);
      frames_.back().last_scalar = true;
      pending_ = {};
      return;
    }
    pending_ = {};
    const Node value = scalar(c, n);
    pop_above(n);
    Frame& top = frames_.back();
    if (top.node->kind != NodeKind::Mapping) return;
    if (top.last_scalar && n > top.indent && !top.node->entries.empty()) {
      Node& last = top.node->entries.back().second;
      if (last.kind == NodeKind::Scalar && !last.quoted && !value.quoted) {
        last.text += ' ';
        last.text += value.text;
        return;
      }
    }
    top.last_scalar = true;
  }

  Node root_;
  bool started_ = false;
  bool frozen_ = false;
  std::vector<Frame> frames_;
  Pending pending_;
  int line_no_ = 0;
  std::size_t line_begin_ = 0;
};

bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  if (s.front() == ' ' || s.back() == ' ') return true;
  static constexpr std::string_view kLeading = "-?:,[]{}#&*!|>'\"%@`.+0123456789";
  if (kLeading.find(s.front()) != std::string_view::npos) return true;
  if (s.find(": ") != std::string_view::npos || s.find(" #") != std::string_view::npos) return true;
  if (s.back() == ':') return true;
  if (std::any_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20; })) return true;
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "null" || lower == "~" || lower == "true" || lower == "false";
}

std::string emit_scalar(const json::Value& v) {
  switch (v.kind()) {
    case json::Kind::Null: return "null";
    case json::Kind::Bool: return v.as_bool() ? "true" : "false";
    case json::Kind::Number: return v.text();
    default: break;
  }
  const std::string& s = v.text();
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<unsigned>(static_cast<unsigned char>(c)));
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

bool is_empty_container(const json::Value& v) {
  return (v.is_array() && v.items().empty()) || (v.is_object() && v.members().empty());
}

void emit_block(const json::Value& v, std::size_t indent, std::vector<std::string>& lines);

// Renders `v` as the value of a sequence item whose dash sits at `indent`.
void emit_item(const json::Value& v, std::size_t indent, std::vector<std::string>& lines) {
  const std::string pad(indent, ' ');
  if (!v.is_array() && !v.is_object()) {
    lines.push_back(pad + "- " + emit_scalar(v));
    return;
  }
  std::vector<std::string> sub;
  emit_block(v, indent + 2, sub);
  if (sub.empty()) {
    lines.push_back(pad + "-");
    return;
  }
  sub.front().replace(0, indent + 2, pad + "- ");
  lines.insert(lines.end(), sub.begin(), sub.end());
}

void emit_block(const json::Value& v, std::size_t indent, std::vector<std::string>& lines) {
  const std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [key, value] : v.members()) {
      if (is_empty_container(value)) continue;
      if (value.is_array() || value.is_object()) {
        lines.push_back(pad + key + ":");
        emit_block(value, indent + 2, lines);
      } else {
        lines.push_back(pad + key + ": " + emit_scalar(value));
      }
    }
  } else if (v.is_array()) {
    for (const auto& item : v.items()) emit_item(item, indent, lines);
  } else {
    lines.push_back(pad + emit_scalar(v));
  }
}

}  // namespace

ParseResult parse(std::string_view text) { return Reader().run(text); }

json::Value to_json(const Node& node) {
  switch (node.kind) {
    case NodeKind::Null: return json::Value::null();
    case NodeKind::Mapping: {
      json::Value obj = json::Value::object();
      for (const auto& [k, v] : node.entries) obj.add(k, to_json(v));
      return obj;
    }
    case NodeKind::Sequence: {
      json::Value arr = json::Value::array();
      for (const auto& item : node.items) arr.items().push_back(to_json(item));
      return arr;
    }
    case NodeKind::Scalar:
      if (node.quoted) return json::Value::string(node.text);
      if (node.text == "~" || node.text == "null") return json::Value::null();
      if (node.text == "true") return json::Value::boolean(true);
      if (node.text == "false") return json::Value::boolean(false);
      if (json::is_integer_literal(node.text)) return json::Value::number(node.text);
      return json::Value::string(node.text);
  }
  return json::Value::null();
}

std::string print(const json::Value& value) {
  std::vector<std::string> lines;
  emit_block(value, 0, lines);
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace forge::yaml
