#pragma once

// S-expression lexing, strict and fault-tolerant parsing, canonical printing
// and content-recovery measurement.
//
// Grammar: lists `( ... )`, bare symbols, double-quoted strings with the
// escapes \" \\ \n \t, and `;` line comments. Numbers are symbols. Any number
// of top-level forms may appear in one text.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/diagnostic.hpp"

namespace forge::sexpr {

inline constexpr int kMaxDepth = 256;

enum class NodeKind { Symbol, String, List };

struct SNode {
  NodeKind kind = NodeKind::List;
  std::string text;             // Symbol/String only; strings are stored unescaped
  std::vector<SNode> children;  // List only
  SourceSpan span;

  static SNode symbol(std::string text, SourceSpan span = {});
  static SNode string(std::string text, SourceSpan span = {});
  static SNode list(std::vector<SNode> children = {}, SourceSpan span = {});

  bool is_list() const { return kind == NodeKind::List; }
  bool is_atom() const { return kind != NodeKind::List; }
  bool is_symbol() const { return kind == NodeKind::Symbol; }
  bool is_string() const { return kind == NodeKind::String; }

  /// Text of the first child if this is a list headed by a symbol, else "".
  std::string_view head() const;

  /// Structural equality: kind, text and children. Spans are ignored.
  friend bool operator==(const SNode& a, const SNode& b);
};

/// True if `text` can be written as a bare symbol.
bool is_valid_symbol(std::string_view text);

enum class TokenKind { OpenParen, CloseParen, Symbol, String, Comment };

struct Token {
  TokenKind kind;
  std::string text;  // symbol text, unescaped string, or comment body after ';'
  SourceSpan span;
};

enum class ParseMode { Strict, Tolerant };

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
  bool complete = true;  // false when strict lexing stopped at an error
};

/// Tokenize `text`. In strict mode an unterminated string stops lexing; in
/// tolerant mode it is closed at the end of its first line and lexing resumes
/// there.
LexResult lex(std::string_view text, ParseMode mode = ParseMode::Strict);

struct ParseOutcome {
  std::vector<SNode> roots;
  std::vector<Diagnostic> diagnostics;
  ParseMode mode = ParseMode::Strict;

  bool ok() const { return !has_errors(diagnostics); }
};

/// All-or-nothing parse. On failure `roots` is empty and `diagnostics` holds
/// the first fatal error.
ParseOutcome parse_strict(std::string_view text);

/// Never fails. Repairs, each reported as an Error diagnostic:
///  - lists still open at end of input are closed there (one UNCLOSED_LIST);
///  - a `)` with no open list is skipped (STRAY_CLOSE);
///  - a string with no closing quote before end of input ends at the end of
///    its line (UNTERMINATED_STRING).
/// A list nested deeper than kMaxDepth is dropped with DEPTH_EXCEEDED.
ParseOutcome parse_tolerant(std::string_view text);

ParseOutcome parse(std::string_view text, ParseMode mode);

/// Canonical text. A list without sub-lists prints on one line. A list with a
/// sub-list keeps its leading atoms on the opening line and puts every child
/// from the first sub-list on its own line, indented two spaces past the
/// list's opening parenthesis. Each root ends with '\n'.
std::string print_canonical(std::span<const SNode> roots);
std::string print_canonical(const SNode& root);

/// Canonical spelling of one atom: a bare symbol, or a quoted string with
/// `"` `\` newline and tab escaped. Symbols that are not valid bare symbols
/// are spelled as strings.
std::string spell_atom(const SNode& atom);

/// Fraction of the (head-path, leaf-text) pairs of `original` present in
/// `recovered`, counted as multisets. A leaf is any atom other than the head
/// symbol of its list; its head-path is the sequence of head symbols of the
/// enclosing lists from the root down. Returns 1.0 when `original` has no
/// leaves and 0.0 when `recovered` is empty.
double content_recovery(std::span<const SNode> original, std::span<const SNode> recovered);
double content_recovery(const ParseOutcome& original, const ParseOutcome& recovered);

/// Number of leaves in the sense of content_recovery.
std::size_t count_leaves(std::span<const SNode> roots);

/// Line-oriented dump of roots (with spans) and diagnostics. Byte-identical for
/// byte-identical input.
std::string serialize(const ParseOutcome& outcome);

}  // namespace forge::sexpr
