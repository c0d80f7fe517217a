#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "forge/corpus.hpp"
#include "forge/sexpr.hpp"
#include "support/golden.hpp"
#include "support/random_tree.hpp"

namespace {

using forge::DiagCode;
using forge::sexpr::NodeKind;
using forge::sexpr::SNode;
using forge::sexpr::TokenKind;
namespace sx = forge::sexpr;

// Independent oracle: (head path, leaf text) pairs collected with a plain map.
using Pairs = std::map<std::pair<std::string, std::string>, int>;

void collect(const SNode& n, const std::string& path, Pairs& out) {
  if (n.is_atom()) {
    ++out[{path, n.text}];
    return;
  }
  const bool headed = !n.children.empty() && n.children[0].is_symbol();
  const std::string here = path + '\x1f' + (headed ? n.children[0].text : "");
  for (std::size_t i = headed ? 1 : 0; i < n.children.size(); ++i) collect(n.children[i], here, out);
}

double oracle_recovery(const std::vector<SNode>& a, const std::vector<SNode>& b) {
  Pairs pa, pb;
  for (const auto& n : a) collect(n, "", pa);
  for (const auto& n : b) collect(n, "", pb);
  int total = 0, kept = 0;
  for (const auto& [k, v] : pa) {
    total += v;
    auto it = pb.find(k);
    if (it != pb.end()) kept += std::min(v, it->second);
  }
  return total == 0 ? 1.0 : static_cast<double>(kept) / total;
}

std::vector<TokenKind> kinds(const sx::LexResult& r) {
  std::vector<TokenKind> k;
  for (const auto& t : r.tokens) k.push_back(t.kind);
  return k;
}

TEST(Lex, MinimalForm) {
  const auto r = sx::lex("(a \"b\")");
  EXPECT_EQ(kinds(r), (std::vector<TokenKind>{TokenKind::OpenParen, TokenKind::Symbol, TokenKind::String,
                                              TokenKind::CloseParen}));
  EXPECT_EQ(r.tokens[1].text, "a");
  EXPECT_EQ(r.tokens[2].text, "b");
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Lex, UnclosedFragmentHasNoCloseToken) {
  const auto r = sx::lex("(pillar memory");
  EXPECT_EQ(kinds(r), (std::vector<TokenKind>{TokenKind::OpenParen, TokenKind::Symbol, TokenKind::Symbol}));
  EXPECT_EQ(r.tokens[2].text, "memory");
}

TEST(Lex, CommentRunsToEndOfLine) {
  const auto r = sx::lex("; note\n()");
  ASSERT_EQ(r.tokens.size(), 3u);
  EXPECT_EQ(r.tokens[0].kind, TokenKind::Comment);
  EXPECT_EQ(r.tokens[0].text, " note");
  EXPECT_EQ(r.tokens[1].kind, TokenKind::OpenParen);
  EXPECT_EQ(r.tokens[2].kind, TokenKind::CloseParen);
}

TEST(Lex, EscapesAreResolved) {
  const auto r = sx::lex(R"("q\" b\\ n\n t\t")");
  ASSERT_EQ(r.tokens.size(), 1u);
  EXPECT_EQ(r.tokens[0].text, "q\" b\\ n\n t\t");
}

TEST(Lex, TokenSpansCoverTheirText) {
  const std::string text = "(a  \"é\" ; c\n bc)";
  const auto r = sx::lex(text);
  for (const auto& t : r.tokens) {
    const std::string slice = text.substr(t.span.begin, t.span.end - t.span.begin);
    switch (t.kind) {
      case TokenKind::OpenParen: EXPECT_EQ(slice, "("); break;
      case TokenKind::CloseParen: EXPECT_EQ(slice, ")"); break;
      case TokenKind::Symbol: EXPECT_EQ(slice, t.text); break;
      case TokenKind::String: EXPECT_EQ(slice, "\"" + t.text + "\""); break;
      case TokenKind::Comment: EXPECT_EQ(slice, ";" + t.text); break;
    }
  }
  // Columns count code points: the closing quote after é sits at column 7.
  EXPECT_EQ(r.tokens[2].span.start_col, 5);
  EXPECT_EQ(r.tokens[2].span.end_col, 8);
}

TEST(Lex, StrictUnterminatedStringStops) {
  const auto r = sx::lex("(a \"open");
  EXPECT_FALSE(r.complete);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::UnterminatedString);
}

TEST(ParseStrict, ListingHasJarvisRoot) {
  const auto out = sx::parse_strict(forge::corpus::jarvis_listing());
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(out.diagnostics.empty());
  ASSERT_EQ(out.roots.size(), 1u);
  EXPECT_EQ(out.roots[0].head(), "intent");
  EXPECT_EQ(out.roots[0].children[1].text, "jarvis");
}

TEST(ParseStrict, EmptyList) {
  const auto out = sx::parse_strict("()");
  ASSERT_EQ(out.roots.size(), 1u);
  EXPECT_TRUE(out.roots[0].is_list());
  EXPECT_TRUE(out.roots[0].children.empty());
}

TEST(ParseStrict, UnclosedIsAtomic) {
  const auto out = sx::parse_strict("(a (b)");
  EXPECT_TRUE(out.roots.empty());
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].code, DiagCode::UnclosedList);
  // End of input: line 1, column 7, zero width.
  EXPECT_EQ(out.diagnostics[0].span.start_col, 7);
  EXPECT_EQ(out.diagnostics[0].span.end_col, 7);
  EXPECT_EQ(out.diagnostics[0].span.begin, 6u);
}

TEST(ParseStrict, StrayCloseAndUnterminatedString) {
  auto a = sx::parse_strict("(a))");
  ASSERT_EQ(a.diagnostics.size(), 1u);
  EXPECT_EQ(a.diagnostics[0].code, DiagCode::StrayClose);
  EXPECT_EQ(a.diagnostics[0].span.begin, 3u);
  EXPECT_TRUE(a.roots.empty());
  auto b = sx::parse_strict("(a \"x)");
  ASSERT_EQ(b.diagnostics.size(), 1u);
  EXPECT_EQ(b.diagnostics[0].code, DiagCode::UnterminatedString);
}

TEST(ParseStrict, MultipleRootsAndDepthLimit) {
  EXPECT_EQ(sx::parse_strict("(a) b (c)").roots.size(), 3u);
  const std::string deep = std::string(300, '(') + std::string(300, ')');
  const auto out = sx::parse_strict(deep);
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].code, DiagCode::DepthExceeded);
  const std::string ok = std::string(256, '(') + std::string(256, ')');
  EXPECT_TRUE(sx::parse_strict(ok).ok());
}

TEST(ParseTolerant, MissingFinalCloseKeepsShape) {
  std::string text(forge::corpus::jarvis_listing());
  text.erase(text.rfind(')'), 1);
  const auto pristine = sx::parse_strict(forge::corpus::jarvis_listing());
  const auto damaged = sx::parse_tolerant(text);
  ASSERT_EQ(damaged.roots.size(), 1u);
  EXPECT_EQ(damaged.roots, pristine.roots);
  ASSERT_EQ(damaged.diagnostics.size(), 1u);
  EXPECT_EQ(damaged.diagnostics[0].code, DiagCode::UnclosedList);
  EXPECT_EQ(damaged.diagnostics[0].span.begin, text.size());
  EXPECT_DOUBLE_EQ(sx::content_recovery(pristine, damaged), 1.0);
  EXPECT_DOUBLE_EQ(oracle_recovery(pristine.roots, damaged.roots), 1.0);
}

TEST(ParseTolerant, StrayCloseSkipped) {
  const auto out = sx::parse_tolerant("(a) ) (b)");
  ASSERT_EQ(out.roots.size(), 2u);
  EXPECT_EQ(out.roots[0], SNode::list({SNode::symbol("a")}));
  EXPECT_EQ(out.roots[1], SNode::list({SNode::symbol("b")}));
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].code, DiagCode::StrayClose);
}

TEST(ParseTolerant, AutoClosesEveryOpenList) {
  const auto out = sx::parse_tolerant("(a (b");
  ASSERT_EQ(out.roots.size(), 1u);
  EXPECT_EQ(out.roots[0], SNode::list({SNode::symbol("a"), SNode::list({SNode::symbol("b")})}));
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].code, DiagCode::UnclosedList);
}

TEST(ParseTolerant, UnterminatedStringClosesAtEndOfLine) {
  const auto out = sx::parse_tolerant("(role \"SOLE DB\n(next))");
  ASSERT_EQ(out.roots.size(), 1u);
  EXPECT_EQ(out.roots[0], SNode::list({SNode::symbol("role"), SNode::string("SOLE DB"),
                                       SNode::list({SNode::symbol("next")})}));
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].code, DiagCode::UnterminatedString);
}

TEST(ParseTolerant, SupersetOfStrictOnValidInput) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::string text = sx::print_canonical(forge::testing::TreeGen(seed).tree());
    const auto s = sx::parse_strict(text);
    const auto t = sx::parse_tolerant(text);
    ASSERT_TRUE(s.ok());
    EXPECT_EQ(s.roots, t.roots);
    EXPECT_TRUE(t.diagnostics.empty());
  }
}

TEST(ParseTolerant, UndamagedPrefixKeepsSpans) {
  const std::string text = "(a (b \"x\") (c d))\n(e f)";
  const auto pristine = sx::parse_strict(text);
  std::string damaged = text;
  damaged.erase(damaged.find("(c d))") + 4, 1);  // the ) closing (c d
  const auto t = sx::parse_tolerant(damaged);
  ASSERT_FALSE(t.roots.empty());
  const SNode& b_orig = pristine.roots[0].children[1];
  const SNode& b_new = t.roots[0].children[1];
  EXPECT_EQ(b_orig, b_new);
  EXPECT_EQ(b_orig.span, b_new.span);
}

TEST(Print, NormalizesWhitespace) {
  EXPECT_EQ(sx::print_canonical(sx::parse_strict("( a  \"b\" )").roots), "(a \"b\")\n");
}

TEST(Print, ListingGolden) {
  const auto out = sx::parse_strict(forge::corpus::jarvis_listing());
  EXPECT_EQ(sx::print_canonical(out.roots), forge::testing::golden("jarvis.canonical.lisp"));
}

TEST(Print, ListingKeepsAtomSequence) {
  auto atoms = [](const std::vector<SNode>& roots) {
    std::vector<std::string> out;
    std::vector<const SNode*> stack;
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back(&*it);
    while (!stack.empty()) {
      const SNode* n = stack.back();
      stack.pop_back();
      if (n->is_atom()) out.push_back(n->text);
      for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
    }
    return out;
  };
  const auto a = sx::parse_strict(forge::corpus::jarvis_listing());
  const auto b = sx::parse_strict(sx::print_canonical(a.roots));
  EXPECT_EQ(atoms(a.roots), atoms(b.roots));
}

TEST(Print, RoundTripAndIdempotenceOnRandomTrees) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const SNode tree = forge::testing::TreeGen(seed).tree();
    const std::string once = sx::print_canonical(tree);
    const auto parsed = sx::parse_strict(once);
    ASSERT_TRUE(parsed.ok()) << once;
    ASSERT_EQ(parsed.roots.size(), 1u);
    EXPECT_EQ(parsed.roots[0], tree) << once;
    EXPECT_EQ(sx::print_canonical(parsed.roots), once);
    EXPECT_EQ(once.find(" \n"), std::string::npos);
    EXPECT_EQ(once.back(), '\n');
  }
}

TEST(Recovery, Extremes) {
  const auto a = sx::parse_strict("(intent p (pillar m))");
  EXPECT_DOUBLE_EQ(sx::content_recovery(a, a), 1.0);
  sx::ParseOutcome empty;
  EXPECT_DOUBLE_EQ(sx::content_recovery(a, empty), 0.0);
  const auto no_leaves = sx::parse_strict("(a (b))");
  EXPECT_DOUBLE_EQ(sx::content_recovery(no_leaves, empty), 1.0);
}

TEST(Recovery, MatchesOracleUnderRandomDeletions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::string text = sx::print_canonical(forge::testing::TreeGen(seed).tree());
    const auto pristine = sx::parse_strict(text);
    for (std::size_t pos = 0; pos < text.size(); pos += 7) {
      std::string damaged = text;
      damaged.erase(pos, 1);
      const auto t = sx::parse_tolerant(damaged);
      EXPECT_NEAR(sx::content_recovery(pristine, t), oracle_recovery(pristine.roots, t.roots), 1e-12);
    }
  }
}

// Leaves ending before a deleted `)` always survive.
TEST(Recovery, PrefixPreservation) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::string text = sx::print_canonical(forge::testing::TreeGen(seed).tree());
    const auto pristine = sx::parse_strict(text);
    std::vector<std::size_t> leaf_ends;
    std::vector<const SNode*> stack{&pristine.roots[0]};
    while (!stack.empty()) {
      const SNode* n = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        const SNode& c = n->children[i];
        if (c.is_list()) stack.push_back(&c);
        else if (!(i == 0 && c.is_symbol())) leaf_ends.push_back(c.span.end);
      }
    }
    if (leaf_ends.empty()) continue;
    for (const auto& tok : sx::lex(text).tokens) {
      if (tok.kind != TokenKind::CloseParen) continue;
      std::string damaged = text;
      damaged.erase(tok.span.begin, 1);
      const auto before = static_cast<double>(
          std::count_if(leaf_ends.begin(), leaf_ends.end(), [&](std::size_t e) { return e <= tok.span.begin; }));
      EXPECT_GE(sx::content_recovery(pristine, sx::parse_tolerant(damaged)) + 1e-12,
                before / static_cast<double>(leaf_ends.size()));
    }
  }
}

TEST(Spans, ParentContainsChildren) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto out = sx::parse_strict(sx::print_canonical(forge::testing::TreeGen(seed).tree()));
    std::vector<const SNode*> stack{&out.roots[0]};
    while (!stack.empty()) {
      const SNode* n = stack.back();
      stack.pop_back();
      const SNode* prev = nullptr;
      for (const auto& c : n->children) {
        EXPECT_TRUE(n->span.contains(c.span));
        if (prev != nullptr) EXPECT_LE(prev->span.end, c.span.begin);
        prev = &c;
        stack.push_back(&c);
      }
    }
  }
}

TEST(Serialize, ListingGoldenAndDeterminism) {
  const auto out = sx::parse_strict(forge::corpus::jarvis_listing());
  EXPECT_EQ(sx::serialize(out), forge::testing::golden("jarvis.parse.txt"));
  const std::string damaged = "(a (b \"x\n) ) )";
  EXPECT_EQ(sx::serialize(sx::parse_tolerant(damaged)), sx::serialize(sx::parse_tolerant(damaged)));
}

TEST(Serialize, DiagnosticLineFormat) {
  const auto out = sx::parse_strict("(a (b)");
  EXPECT_EQ(forge::format_diagnostics(out.diagnostics), "ERROR UNCLOSED_LIST 1:7-1:7 " + out.diagnostics[0].message + "\n");
}

}  // namespace
