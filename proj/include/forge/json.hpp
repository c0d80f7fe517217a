#pragma once

// A small JSON value model with a strict parser and a deterministic printer.
// Parsing follows RFC 8259 with no extensions; the first syntax error aborts.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/diagnostic.hpp"

namespace forge::json {

enum class Kind { Null, Bool, Number, String, Array, Object };

class Value {
 public:
  using Member = std::pair<std::string, Value>;

  Value() = default;
  static Value null() { return Value(); }
  static Value boolean(bool b);
  static Value number(std::string text);  // text must be a valid JSON number
  static Value string(std::string s);
  static Value array(std::vector<Value> items = {});
  static Value object(std::vector<Member> members = {});

  Kind kind() const { return kind_; }
  bool is_null() const { return kind_ == Kind::Null; }
  bool is_string() const { return kind_ == Kind::String; }
  bool is_number() const { return kind_ == Kind::Number; }
  bool is_array() const { return kind_ == Kind::Array; }
  bool is_object() const { return kind_ == Kind::Object; }

  bool as_bool() const { return flag_; }
  /// String contents, or the literal text of a number.
  const std::string& text() const { return text_; }
  const std::vector<Value>& items() const { return items_; }
  std::vector<Value>& items() { return items_; }
  const std::vector<Member>& members() const { return members_; }

  /// Appends a member; keys are expected to be unique.
  void add(std::string key, Value value);
  const Value* find(std::string_view key) const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  Kind kind_ = Kind::Null;
  bool flag_ = false;
  std::string text_;
  std::vector<Value> items_;
  std::vector<Member> members_;
};

struct ParseResult {
  std::optional<Value> value;
  std::vector<Diagnostic> diagnostics;  // at most one JSON_SYNTAX error
};

ParseResult parse(std::string_view text);

/// Two-space pretty printing. A container holding no containers is written on
/// one line (`[1, 2]`, `{"a": 1}`); any other container puts one member per
/// line. Output ends with '\n'.
std::string print(const Value& value);

/// True if `text` is a JSON integer literal: -?(0|[1-9][0-9]*).
bool is_integer_literal(std::string_view text);

std::string quote(std::string_view s);

}  // namespace forge::json
