#include "forge/json.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace forge::json {

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Bool;
  v.flag_ = b;
  return v;
}

Value Value::number(std::string text) {
  Value v;
  v.kind_ = Kind::Number;
  v.text_ = std::move(text);
  return v;
}

Value Value::string(std::string s) {
  Value v;
  v.kind_ = Kind::String;
  v.text_ = std::move(s);
  return v;
}

Value Value::array(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::Array;
  v.items_ = std::move(items);
  return v;
}

Value Value::object(std::vector<Member> members) {
  Value v;
  v.kind_ = Kind::Object;
  v.members_ = std::move(members);
  return v;
}

void Value::add(std::string key, Value value) { members_.emplace_back(std::move(key), std::move(value)); }

const Value* Value::find(std::string_view key) const {
  for (const auto& [k, v] : members_) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool is_integer_literal(std::string_view t) {
  std::size_t i = 0;
  if (i < t.size() && t[i] == '-') ++i;
  if (i >= t.size()) return false;
  if (t[i] == '0') return i + 1 == t.size();
  return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

namespace {

constexpr int kMaxDepth = 256;

SourceSpan span_at(std::string_view text, std::size_t offset) {
  SourceSpan s;
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++col;
    }
  }
  s.start_line = s.end_line = line;
  s.start_col = col;
  s.begin = offset;
  if (offset < text.size()) {
    s.end_col = col + 1;
    s.end = offset + 1;
  } else {
    s.end_col = col;
    s.end = offset;
  }
  return s;
}

struct SyntaxError {
  std::size_t offset;
  std::string message;
};

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : t_(text) {}

  Value document() {
    skip_ws();
    Value v = value(0);
    skip_ws();
    if (i_ < t_.size()) fail("unexpected content after the document");
    return v;
  }

 private:
  [[noreturn]] void fail(std::string message) const { throw SyntaxError{i_, std::move(message)}; }

  bool at_end() const { return i_ >= t_.size(); }

  void skip_ws() {
    while (!at_end() && (t_[i_] == ' ' || t_[i_] == '\t' || t_[i_] == '\n' || t_[i_] == '\r')) ++i_;
  }

  void expect(char c) {
    if (at_end() || t_[i_] != c) fail(fmt::format("expected '{}'", c));
    ++i_;
  }

  Value value(int depth) {
    if (at_end()) fail("unexpected end of input");
    if (depth >= kMaxDepth) fail("nesting too deep");
    const char c = t_[i_];
    if (c == '{') return object(depth);
    if (c == '[') return array(depth);
    if (c == '"') return Value::string(string());
    if (c == '-' || (c >= '0' && c <= '9')) return number();
    if (t_.substr(i_, 4) == "true") {
      i_ += 4;
      return Value::boolean(true);
    }
    if (t_.substr(i_, 5) == "false") {
      i_ += 5;
      return Value::boolean(false);
    }
    if (t_.substr(i_, 4) == "null") {
      i_ += 4;
      return Value::null();
    }
    fail("expected a value");
  }

  Value object(int depth) {
    ++i_;
    Value obj = Value::object();
    std::set<std::string> keys;
    skip_ws();
    if (!at_end() && t_[i_] == '}') {
      ++i_;
      return obj;
    }
    while (true) {
      skip_ws();
      if (at_end() || t_[i_] != '"') fail("expected a string key");
      const std::size_t key_at = i_;
      std::string key = string();
      if (!keys.insert(key).second) {
        i_ = key_at;
        fail(fmt::format("duplicate key \"{}\"", key));
      }
      skip_ws();
      expect(':');
      skip_ws();
      obj.add(std::move(key), value(depth + 1));
      skip_ws();
      if (at_end()) fail("unexpected end of input in object");
      if (t_[i_] == ',') {
        ++i_;
        continue;
      }
      if (t_[i_] == '}') {
        ++i_;
        return obj;
      }
      fail("expected ',' or '}'");
    }
  }

  Value array(int depth) {
    ++i_;
    Value arr = Value::array();
    skip_ws();
    if (!at_end() && t_[i_] == ']') {
      ++i_;
      return arr;
    }
    while (true) {
      skip_ws();
      arr.items().push_back(value(depth + 1));
      skip_ws();
      if (at_end()) fail("unexpected end of input in array");
      if (t_[i_] == ',') {
        ++i_;
        continue;
      }
      if (t_[i_] == ']') {
        ++i_;
        return arr;
      }
      fail("expected ',' or ']'");
    }
  }

  unsigned hex4() {
    if (i_ + 4 > t_.size()) fail("truncated \\u escape");
    unsigned v = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = t_[i_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
      else fail("bad hex digit in \\u escape");
    }
    return v;
  }

  std::string string() {
    ++i_;
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      const char c = t_[i_];
      if (c == '"') {
        ++i_;
        return out;
      }
      if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
      if (c != '\\') {
        out += c;
        ++i_;
        continue;
      }
      ++i_;
      if (at_end()) fail("unterminated escape");
      const char e = t_[i_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          unsigned cp = hex4();
          if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (t_.substr(i_, 2) != "\\u") fail("unpaired surrogate");
            i_ += 2;
            const unsigned lo = hex4();
            if (lo < 0xDC00 || lo > 0xDFFF) fail("unpaired surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
          } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            fail("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default:
          --i_;
          fail("invalid escape");
      }
    }
  }

  Value number() {
    const std::size_t start = i_;
    auto digits = [&] {
      const std::size_t from = i_;
      while (!at_end() && t_[i_] >= '0' && t_[i_] <= '9') ++i_;
      return i_ > from;
    };
    if (t_[i_] == '-') ++i_;
    if (at_end()) fail("truncated number");
    if (t_[i_] == '0') {
      ++i_;
    } else if (!digits()) {
      fail("expected digits");
    }
    if (!at_end() && t_[i_] == '.') {
      ++i_;
      if (!digits()) fail("expected digits after '.'");
    }
    if (!at_end() && (t_[i_] == 'e' || t_[i_] == 'E')) {
      ++i_;
      if (!at_end() && (t_[i_] == '+' || t_[i_] == '-')) ++i_;
      if (!digits()) fail("expected exponent digits");
    }
    return Value::number(std::string(t_.substr(start, i_ - start)));
  }

  std::string_view t_;
  std::size_t i_ = 0;
};

bool is_container(const Value& v) { return v.is_array() || v.is_object(); }

void print_value(const Value& v, std::size_t indent, std::string& out);

void print_scalar(const Value& v, std::string& out) {
  switch (v.kind()) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += v.as_bool() ? "true" : "false"; break;
    case Kind::Number: out += v.text(); break;
    case Kind::String: out += quote(v.text()); break;
    default: break;
  }
}

void print_value(const Value& v, std::size_t indent, std::string& out) {
  if (v.is_array()) {
    const auto& items = v.items();
    if (items.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::none_of(items.begin(), items.end(), is_container);
    out += '[';
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (flat) {
        if (k > 0) out += ", ";
      } else {
        out += k > 0 ? ",\n" : "\n";
        out.append(indent + 2, ' ');
      }
      print_value(items[k], indent + 2, out);
    }
    if (!flat) {
      out += '\n';
      out.append(indent, ' ');
    }
    out += ']';
  } else if (v.is_object()) {
    const auto& members = v.members();
    if (members.empty()) {
      out += "{}";
      return;
    }
    const bool flat = std::none_of(members.begin(), members.end(),
                                   [](const Value::Member& m) { return is_container(m.second); });
    out += '{';
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (flat) {
        if (k > 0) out += ", ";
      } else {
        out += k > 0 ? ",\n" : "\n";
        out.append(indent + 2, ' ');
      }
      out += quote(members[k].first);
      out += ": ";
      print_value(members[k].second, indent + 2, out);
    }
    if (!flat) {
      out += '\n';
      out.append(indent, ' ');
    }
    out += '}';
  } else {
    print_scalar(v, out);
  }
}

}  // namespace

ParseResult parse(std::string_view text) {
  try {
    return ParseResult{Reader(text).document(), {}};
  } catch (const SyntaxError& e) {
    ParseResult r;
    r.diagnostics.push_back(make_error(DiagCode::JsonSyntax, span_at(text, e.offset), e.message));
    return r;
  }
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
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

std::string print(const Value& value) {
  std::string out;
  print_value(value, 0, out);
  out += '\n';
  return out;
}

}  // namespace forge::json
