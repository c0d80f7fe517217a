#include "forge/sexpr.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>

#include <fmt/format.h>

namespace forge::sexpr {

SNode SNode::symbol(std::string text, SourceSpan span) {
  return SNode{NodeKind::Symbol, std::move(text), {}, span};
}

SNode SNode::string(std::string text, SourceSpan span) {
  return SNode{NodeKind::String, std::move(text), {}, span};
}

SNode SNode::list(std::vector<SNode> children, SourceSpan span) {
  return SNode{NodeKind::List, {}, std::move(children), span};
}

std::string_view SNode::head() const {
  if (kind != NodeKind::List || children.empty() || !children.front().is_symbol()) return {};
  return children.front().text;
}

bool operator==(const SNode& a, const SNode& b) {
  return a.kind == b.kind && a.text == b.text && a.children == b.children;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_delimiter(char c) { return is_space(c) || c == '(' || c == ')' || c == ';' || c == '"'; }

struct Position {
  int line = 1;
  int col = 1;
  std::size_t offset = 0;
};

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_.offset >= text_.size(); }
  char peek() const { return text_[pos_.offset]; }
  const Position& position() const { return pos_; }
  std::size_t offset() const { return pos_.offset; }

  void advance() {
    const char c = text_[pos_.offset++];
    if (c == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++pos_.col;
    }
  }

  void reset(const Position& p) { pos_ = p; }

 private:
  std::string_view text_;
  Position pos_;
};

SourceSpan span_of(const Position& a, const Position& b) {
  return SourceSpan{a.line, a.col, b.line, b.col, a.offset, b.offset};
}

char unescape(char c) {
  switch (c) {
    case 'n': return '\n';
    case 't': return '\t';
    default: return c;  // covers \" and \\; unknown escapes yield the character itself
  }
}

}  // namespace

bool is_valid_symbol(std::string_view text) {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(), is_delimiter);
}

LexResult lex(std::string_view text, ParseMode mode) {
  LexResult result;
  Cursor cur(text);
  while (!cur.done()) {
    const char c = cur.peek();
    const Position start = cur.position();
    if (is_space(c)) {
      cur.advance();
    } else if (c == ';') {
      cur.advance();
      const std::size_t body = cur.offset();
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      result.tokens.push_back({TokenKind::Comment, std::string(text.substr(body, cur.offset() - body)),
                               span_of(start, cur.position())});
    } else if (c == '(' || c == ')') {
      cur.advance();
      result.tokens.push_back({c == '(' ? TokenKind::OpenParen : TokenKind::CloseParen,
                               std::string(1, c), span_of(start, cur.position())});
    } else if (c == '"') {
      cur.advance();
      std::string value;
      bool closed = false;
      while (!cur.done()) {
        char ch = cur.peek();
        cur.advance();
        if (ch == '"') {
          closed = true;
          break;
        }
        if (ch == '\\' && !cur.done()) {
          ch = unescape(cur.peek());
          cur.advance();
        }
        value += ch;
      }
      if (closed) {
        result.tokens.push_back({TokenKind::String, std::move(value), span_of(start, cur.position())});
        continue;
      }
      if (mode == ParseMode::Strict) {
        result.diagnostics.push_back(make_error(DiagCode::UnterminatedString,
                                                span_of(start, cur.position()),
                                                "string is not terminated before end of input"));
        result.complete = false;
        return result;
      }
      // Tolerant: the string ends where its first line ends.
      cur.reset(start);
      cur.advance();
      value.clear();
      while (!cur.done() && cur.peek() != '\n') {
        char ch = cur.peek();
        cur.advance();
        if (ch == '\\' && !cur.done() && cur.peek() != '\n') {
          ch = unescape(cur.peek());
          cur.advance();
        }
        value += ch;
      }
      const SourceSpan span = span_of(start, cur.position());
      result.diagnostics.push_back(make_error(DiagCode::UnterminatedString, span,
                                              "string is not terminated; closed at end of line"));
      result.tokens.push_back({TokenKind::String, std::move(value), span});
    } else {
      while (!cur.done() && !is_delimiter(cur.peek())) cur.advance();
      result.tokens.push_back({TokenKind::Symbol,
                               std::string(text.substr(start.offset, cur.offset() - start.offset)),
                               span_of(start, cur.position())});
    }
  }
  return result;
}

namespace {

struct ParseAbort {
  Diagnostic diagnostic;
};

class Parser {
 public:
  Parser(const LexResult& lexed, ParseMode mode, SourceSpan eof)
      : tokens_(lexed.tokens), lexed_(lexed), mode_(mode), eof_(eof) {}

  ParseOutcome run() {
    ParseOutcome out;
    out.mode = mode_;
    try {
      while (pos_ < tokens_.size()) {
        const Token& tok = tokens_[pos_];
        switch (tok.kind) {
          case TokenKind::Comment:
            ++pos_;
            break;
          case TokenKind::CloseParen:
            fail(make_error(DiagCode::StrayClose, tok.span, "')' without a matching '('"));
            ++pos_;
            break;
          case TokenKind::OpenParen:
            if (auto node = parse_list(1)) out.roots.push_back(std::move(*node));
            break;
          case TokenKind::Symbol:
            out.roots.push_back(SNode::symbol(tok.text, tok.span));
            ++pos_;
            break;
          case TokenKind::String:
            out.roots.push_back(SNode::string(tok.text, tok.span));
            ++pos_;
            break;
        }
      }
      if (mode_ == ParseMode::Strict && !lexed_.complete) throw ParseAbort{lexed_.diagnostics.front()};
    } catch (const ParseAbort& abort) {
      out.roots.clear();
      out.diagnostics = {abort.diagnostic};
      return out;
    }
    if (unclosed_) {
      diagnostics_.push_back(make_error(
          DiagCode::UnclosedList, eof_,
          fmt::format("{} list(s) not closed at end of input; innermost opened at {}:{}",
                      unclosed_count_, unclosed_at_.start_line, unclosed_at_.start_col)));
    }
    out.diagnostics = lexed_.diagnostics;
    out.diagnostics.insert(out.diagnostics.end(), diagnostics_.begin(), diagnostics_.end());
    std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.span.begin < b.span.begin; });
    return out;
  }

 private:
  void fail(Diagnostic d) {
    if (mode_ == ParseMode::Strict) throw ParseAbort{std::move(d)};
    diagnostics_.push_back(std::move(d));
  }

  // Called with pos_ at end of tokens while `depth` lists are open.
  void hit_end(int depth, const SourceSpan& innermost) {
    if (mode_ == ParseMode::Strict) {
      if (!lexed_.complete) throw ParseAbort{lexed_.diagnostics.front()};
      throw ParseAbort{make_error(DiagCode::UnclosedList, eof_,
                                  fmt::format("list opened at {}:{} is not closed",
                                              innermost.start_line, innermost.start_col))};
    }
    if (!unclosed_) {
      unclosed_ = true;
      unclosed_count_ = depth;
      unclosed_at_ = innermost;
    }
  }

  std::optional<SNode> parse_list(int depth) {
    const Token& open = tokens_[pos_++];
    if (depth > kMaxDepth) {
      fail(make_error(DiagCode::DepthExceeded, open.span,
                      fmt::format("nesting deeper than {} levels; list dropped", kMaxDepth)));
      int level = 1;
      while (pos_ < tokens_.size() && level > 0) {
        if (tokens_[pos_].kind == TokenKind::OpenParen) ++level;
        if (tokens_[pos_].kind == TokenKind::CloseParen) --level;
        ++pos_;
      }
      if (level > 0) hit_end(depth - 1 + level, open.span);
      return std::nullopt;
    }
    SNode list = SNode::list({}, open.span);
    while (true) {
      if (pos_ >= tokens_.size()) {
        hit_end(depth, open.span);
        list.span.end_line = eof_.end_line;
        list.span.end_col = eof_.end_col;
        list.span.end = eof_.end;
        return list;
      }
      const Token& tok = tokens_[pos_];
      switch (tok.kind) {
        case TokenKind::Comment:
          ++pos_;
          break;
        case TokenKind::CloseParen:
          list.span.end_line = tok.span.end_line;
          list.span.end_col = tok.span.end_col;
          list.span.end = tok.span.end;
          ++pos_;
          return list;
        case TokenKind::OpenParen:
          if (auto child = parse_list(depth + 1)) list.children.push_back(std::move(*child));
          break;
        case TokenKind::Symbol:
          list.children.push_back(SNode::symbol(tok.text, tok.span));
          ++pos_;
          break;
        case TokenKind::String:
          list.children.push_back(SNode::string(tok.text, tok.span));
          ++pos_;
          break;
      }
    }
  }

  const std::vector<Token>& tokens_;
  const LexResult& lexed_;
  ParseMode mode_;
  SourceSpan eof_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diagnostics_;
  bool unclosed_ = false;
  int unclosed_count_ = 0;
  SourceSpan unclosed_at_;
};

SourceSpan end_of_input(std::string_view text) {
  Cursor cur(text);
  while (!cur.done()) cur.advance();
  return span_of(cur.position(), cur.position());
}

}  // namespace

ParseOutcome parse(std::string_view text, ParseMode mode) {
  const LexResult lexed = lex(text, mode);
  return Parser(lexed, mode, end_of_input(text)).run();
}

ParseOutcome parse_strict(std::string_view text) { return parse(text, ParseMode::Strict); }

ParseOutcome parse_tolerant(std::string_view text) { return parse(text, ParseMode::Tolerant); }

std::string spell_atom(const SNode& atom) {
  if (atom.is_symbol() && is_valid_symbol(atom.text)) return atom.text;
  std::string out = "\"";
  for (char c : atom.text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

namespace {

void print_node(const SNode& node, std::size_t indent, std::string& out) {
  if (node.is_atom()) {
    out += spell_atom(node);
    return;
  }
  const auto& kids = node.children;
  const bool nested = std::any_of(kids.begin(), kids.end(), [](const SNode& c) { return c.is_list(); });
  out += '(';
  std::size_t i = 0;
  for (; i < kids.size() && (!nested || kids[i].is_atom()); ++i) {
    if (i > 0) out += ' ';
    print_node(kids[i], indent, out);
  }
  for (; i < kids.size(); ++i) {
    out += '\n';
    out.append(indent + 2, ' ');
    print_node(kids[i], indent + 2, out);
  }
  out += ')';
}

using LeafKey = std::pair<std::vector<std::string>, std::string>;

void collect_leaves(const SNode& node, std::vector<std::string>& path,
                    std::map<LeafKey, std::size_t>& out) {
  if (node.is_atom()) {
    ++out[{path, node.text}];
    return;
  }
  if (node.children.empty()) return;
  const bool symbol_head = node.children.front().is_symbol();
  path.push_back(symbol_head ? node.children.front().text : std::string());
  for (std::size_t i = symbol_head ? 1 : 0; i < node.children.size(); ++i) {
    collect_leaves(node.children[i], path, out);
  }
  path.pop_back();
}

std::map<LeafKey, std::size_t> leaf_multiset(std::span<const SNode> roots) {
  std::map<LeafKey, std::size_t> out;
  std::vector<std::string> path;
  for (const auto& r : roots) collect_leaves(r, path, out);
  return out;
}

void dump_node(const SNode& node, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  const auto& s = node.span;
  const char* kind = node.is_list() ? "list" : node.is_symbol() ? "symbol" : "string";
  out += fmt::format("{} {}:{}-{}:{}", kind, s.start_line, s.start_col, s.end_line, s.end_col);
  if (node.is_atom()) {
    out += ' ';
    out += node.is_string() ? spell_atom(node) : node.text;
  }
  out += '\n';
  for (const auto& child : node.children) dump_node(child, depth + 1, out);
}

}  // namespace

std::string print_canonical(std::span<const SNode> roots) {
  std::string out;
  for (const auto& root : roots) {
    print_node(root, 0, out);
    out += '\n';
  }
  return out;
}

std::string print_canonical(const SNode& root) { return print_canonical(std::span<const SNode>(&root, 1)); }

std::size_t count_leaves(std::span<const SNode> roots) {
  std::size_t n = 0;
  for (const auto& [key, count] : leaf_multiset(roots)) n += count;
  return n;
}

double content_recovery(std::span<const SNode> original, std::span<const SNode> recovered) {
  const auto want = leaf_multiset(original);
  std::size_t total = 0;
  for (const auto& [key, count] : want) total += count;
  if (total == 0) return 1.0;
  if (recovered.empty()) return 0.0;
  const auto got = leaf_multiset(recovered);
  std::size_t kept = 0;
  for (const auto& [key, count] : want) {
    if (auto it = got.find(key); it != got.end()) kept += std::min(count, it->second);
  }
  return static_cast<double>(kept) / static_cast<double>(total);
}

double content_recovery(const ParseOutcome& original, const ParseOutcome& recovered) {
  return content_recovery(std::span<const SNode>(original.roots), std::span<const SNode>(recovered.roots));
}

std::string serialize(const ParseOutcome& outcome) {
  std::string out = outcome.mode == ParseMode::Strict ? "mode strict\n" : "mode tolerant\n";
  for (const auto& root : outcome.roots) dump_node(root, 0, out);
  out += fmt::format("diagnostics {}\n", outcome.diagnostics.size());
  out += format_diagnostics(outcome.diagnostics);
  return out;
}

}  // namespace forge::sexpr
