#include <gtest/gtest.h>

#include <algorithm>

#include "forge/bridge.hpp"
#include "forge/corpus.hpp"
#include "forge/intent.hpp"
#include "forge/json.hpp"
#include "forge/yaml.hpp"
#include "support/golden.hpp"

namespace {

using forge::DiagCode;
using forge::bridge::Format;
using forge::intent::IntentDoc;
namespace br = forge::bridge;
namespace in = forge::intent;
namespace js = forge::json;
namespace ym = forge::yaml;
namespace sx = forge::sexpr;

constexpr Format kAll[] = {Format::Sexpr, Format::Json, Format::Yaml, Format::Markdown};

IntentDoc listing() { return in::load(forge::corpus::jarvis_listing()).doc; }

// ---- JSON value layer

TEST(Json, ParsesScalarsAndContainers) {
  const auto r = js::parse(R"({"a": [1, -2.5e3, true, false, null], "b": "x\u00e9\n"})");
  ASSERT_TRUE(r.value);
  const auto& v = *r.value;
  ASSERT_TRUE(v.is_object());
  const auto* a = v.find("a");
  ASSERT_NE(a, nullptr);
  ASSERT_EQ(a->items().size(), 5u);
  EXPECT_EQ(a->items()[0].text(), "1");
  EXPECT_EQ(a->items()[1].text(), "-2.5e3");
  EXPECT_TRUE(a->items()[2].as_bool());
  EXPECT_TRUE(a->items()[4].is_null());
  EXPECT_EQ(v.find("b")->text(), "x\xc3\xa9\n");
}

TEST(Json, SurrogatePairs) {
  const auto ok = js::parse(R"("\ud83d\ude00")");
  ASSERT_TRUE(ok.value);
  EXPECT_EQ(ok.value->text(), "\xf0\x9f\x98\x80");
  EXPECT_FALSE(js::parse(R"("\ud83d")").value);
  EXPECT_FALSE(js::parse(R"("\ude00")").value);
}

TEST(Json, RejectsNonStandardInput) {
  for (const char* bad : {"{", "[1,]", "{\"a\":1,}", "01", "+1", "1.", ".5", "'x'", "[1] 2", "\"a\tb\"",
                          "{a: 1}", "nul", "", "[", "\"\\x\"", "NaN", "// c\n1"}) {
    const auto r = js::parse(bad);
    EXPECT_FALSE(r.value) << bad;
    ASSERT_EQ(r.diagnostics.size(), 1u) << bad;
    EXPECT_EQ(r.diagnostics[0].code, DiagCode::JsonSyntax);
  }
}

TEST(Json, SyntaxErrorPosition) {
  const auto r = js::parse("{\n  \"a\": ]\n}");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].span.start_line, 2);
  EXPECT_EQ(r.diagnostics[0].span.start_col, 8);
}

TEST(Json, PrintLayout) {
  auto v = js::Value::object();
  v.add("flat", js::Value::array({js::Value::number("1"), js::Value::string("a")}));
  v.add("empty", js::Value::array());
  EXPECT_EQ(js::print(v), "{\n  \"flat\": [1, \"a\"],\n  \"empty\": []\n}\n");
  EXPECT_EQ(js::print(js::Value::object({{"k", js::Value::boolean(true)}})), "{\"k\": true}\n");
  EXPECT_EQ(js::quote("a\"\\\n\x01"), "\"a\\\"\\\\\\n\\u0001\"");
}

TEST(Json, IntegerLiteral) {
  for (const char* yes : {"0", "7", "-3", "120"}) EXPECT_TRUE(js::is_integer_literal(yes)) << yes;
  for (const char* no : {"", "-", "01", "1.0", "1e3", "+1", "x"}) EXPECT_FALSE(js::is_integer_literal(no)) << no;
}

// ---- YAML layer

TEST(Yaml, ParsesBlockForms) {
  const auto r = ym::parse("# c\na: 1\nb:\n  - x\n  - - y\n    - z\nc:\n  d: \"q: r\"\n  e:\n");
  ASSERT_TRUE(r.root);
  EXPECT_TRUE(r.diagnostics.empty());
  const auto v = ym::to_json(*r.root);
  EXPECT_EQ(js::print(v),
            "{\n  \"a\": 1,\n  \"b\": [\n    \"x\",\n    [\"y\", \"z\"]\n  ],\n"
            "  \"c\": {\"d\": \"q: r\", \"e\": null}\n}\n");
}

TEST(Yaml, CompactMappingInSequence) {
  const auto r = ym::parse("- k: v\n  n: 2\n- w\n");
  ASSERT_TRUE(r.root);
  EXPECT_EQ(js::print(ym::to_json(*r.root)), "[\n  {\"k\": \"v\", \"n\": 2},\n  \"w\"\n]\n");
}

TEST(Yaml, SyntaxErrors) {
  for (const char* bad : {"a:\n\t- x\n", "a: \"open\n", "a: b\n  - c\n"}) {
    const auto r = ym::parse(bad);
    ASSERT_FALSE(r.diagnostics.empty()) << bad;
    EXPECT_EQ(r.diagnostics[0].code, DiagCode::YamlSyntax) << bad;
  }
}

TEST(Yaml, PrintQuotesAmbiguousScalars) {
  auto v = js::Value::object();
  v.add("a", js::Value::string("true"));
  v.add("b", js::Value::string("12"));
  v.add("c", js::Value::string("x: y"));
  v.add("d", js::Value::string("- z"));
  v.add("e", js::Value::string(""));
  v.add("f", js::Value::string("\"q\""));
  const std::string text = ym::print(v);
  const auto back = ym::parse(text);
  ASSERT_TRUE(back.root) << text;
  EXPECT_EQ(ym::to_json(*back.root), v) << text;
}

// ---- document bridges: goldens

TEST(Golden, Json) { EXPECT_EQ(br::to_json(listing()), forge::testing::golden("jarvis.json")); }
TEST(Golden, Yaml) { EXPECT_EQ(br::to_yaml(listing()), forge::testing::golden("jarvis.yaml")); }
TEST(Golden, Markdown) { EXPECT_EQ(br::to_markdown(listing()), forge::testing::golden("jarvis.md")); }
TEST(Golden, Sexpr) {
  EXPECT_EQ(br::to_format(listing(), Format::Sexpr), forge::testing::golden("jarvis.canonical.lisp"));
}

TEST(Golden, EachGoldenReadsBackToTheListing) {
  const auto doc = listing();
  EXPECT_EQ(br::from_json(forge::testing::golden("jarvis.json")).doc, doc);
  EXPECT_EQ(br::from_yaml(forge::testing::golden("jarvis.yaml")).doc, doc);
  EXPECT_EQ(br::from_markdown(forge::testing::golden("jarvis.md")).doc, doc);
  EXPECT_EQ(br::from_format(forge::testing::golden("jarvis.lisp"), Format::Sexpr).doc, doc);
}

// ---- round trips

TEST(RoundTrip, RandomDocsInEveryFormat) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto doc = forge::corpus::random_doc(seed);
    for (Format f : kAll) {
      const std::string text = br::to_format(doc, f);
      const auto back = br::from_format(text, f);
      ASSERT_TRUE(back.doc) << br::format_name(f) << " seed " << seed;
      EXPECT_FALSE(forge::has_errors(back.diagnostics));
      EXPECT_EQ(*back.doc, doc) << br::format_name(f) << " seed " << seed << "\n" << text;
      EXPECT_EQ(br::to_format(*back.doc, f), text);
    }
  }
}

TEST(RoundTrip, EmptyDocument) {
  IntentDoc doc;
  doc.project = "p";
  for (Format f : kAll) {
    const auto back = br::from_format(br::to_format(doc, f), f);
    ASSERT_TRUE(back.doc) << br::format_name(f);
    EXPECT_EQ(*back.doc, doc) << br::format_name(f);
  }
}

// ---- JSON atom spelling

TEST(JsonAtoms, StringsNumbersAndSymbols) {
  const auto doc = in::load("(intent p (design-constraints (max-latency-ms 250) (label \"a b\") (neg -4)))").doc;
  const std::string text = br::to_json(doc);
  EXPECT_NE(text.find("[\"max-latency-ms\", 250]"), std::string::npos) << text;
  EXPECT_NE(text.find("[\"label\", \"\\\"a b\\\"\"]"), std::string::npos) << text;
  EXPECT_NE(text.find("[\"neg\", -4]"), std::string::npos) << text;
  EXPECT_EQ(br::from_json(text).doc, doc);
}

TEST(JsonAtoms, NullIsEmptyList) {
  const auto r = br::from_json(R"({"intent": "p", "design_constraints": [["c", null]], "pillars": []})");
  ASSERT_TRUE(r.doc);
  ASSERT_EQ(r.doc->constraints.size(), 1u);
  EXPECT_EQ(r.doc->constraints[0].body, sx::SNode::list({sx::SNode::symbol("c"), sx::SNode::list()}));
}

// ---- strict JSON reader

TEST(JsonReader, TruncatedObject) {
  const auto r = br::from_json("{");
  EXPECT_FALSE(r.doc);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::JsonSyntax);
}

TEST(JsonReader, WrongTypeIsSchemaError) {
  const auto r = br::from_json(R"({"intent": 5})");
  EXPECT_FALSE(r.doc);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::JsonSchema);
}

TEST(JsonReader, SchemaViolations) {
  for (const char* bad : {R"([])", R"({})", R"({"intent": "p", "color": 1})",
                          R"({"intent": "p", "pillars": [{"name": "a", "components": 3}]})",
                          R"({"intent": "p", "pillars": [{"purpose": "x"}]})",
                          R"({"intent": "p", "design_constraints": [7]})",
                          R"({"intent": "p", "design_constraints": [["a b"]]})",
                          R"({"intent": "p", "pillars": [{"name": "a", "components": [{"name": "c",)"
                          R"( "symbols": [{"kind": "macro", "name": "m"}]}]}]})"}) {
    const auto r = br::from_json(bad);
    EXPECT_FALSE(r.doc) << bad;
    ASSERT_EQ(r.diagnostics.size(), 1u) << bad;
    EXPECT_EQ(r.diagnostics[0].code, DiagCode::JsonSchema) << bad;
  }
}

// Every single-byte deletion of a valid document either fails with exactly one
// error and no document, or yields a document with no diagnostics at all.
TEST(JsonReader, AllOrNothing) {
  const std::string text = forge::testing::golden("jarvis.json");
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::string damaged = text;
    damaged.erase(i, 1);
    const auto r = br::from_json(damaged);
    if (r.doc) {
      EXPECT_TRUE(r.diagnostics.empty()) << i;
    } else {
      EXPECT_EQ(r.diagnostics.size(), 1u) << i;
    }
  }
}

// ---- lenient YAML reader

TEST(YamlReader, DedentIsSilent) {
  std::string text = forge::testing::golden("jarvis.yaml");
  const std::string line = "        role: SOLE DB gateway\n";
  const auto at = text.find(line);
  ASSERT_NE(at, std::string::npos);
  text.erase(at, 2);
  const auto r = br::from_yaml(text);
  ASSERT_TRUE(r.doc);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_NE(*r.doc, listing());
  EXPECT_FALSE(r.doc->pillars[0].components[0].role.has_value());
}

TEST(YamlReader, TabIsSyntaxError) {
  std::string text = forge::testing::golden("jarvis.yaml");
  text.replace(text.find("  - name: memory"), 2, "\t");
  const auto r = br::from_yaml(text);
  EXPECT_FALSE(r.doc);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::YamlSyntax);
}

TEST(YamlReader, UnknownKeysDropped) {
  const auto r = br::from_yaml("intent: p\ncolor: blue\npillars:\n  - name: a\n    weight: 3\n");
  ASSERT_TRUE(r.doc);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.doc->project, "p");
  ASSERT_EQ(r.doc->pillars.size(), 1u);
  EXPECT_EQ(r.doc->pillars[0].name, "a");
}

// ---- Markdown

TEST(Markdown, SplitLines) {
  const auto lines = br::split_markdown("# a\n\n## b\nText here\n  - item\n##### deep\n#### four\n");
  ASSERT_EQ(lines.size(), 6u);
  using K = br::MarkdownLine::Kind;
  EXPECT_EQ(lines[0].kind, K::Heading1);
  EXPECT_EQ(lines[0].text, "a");
  EXPECT_EQ(lines[1].kind, K::Heading2);
  EXPECT_EQ(lines[2].kind, K::Text);
  EXPECT_EQ(lines[3].kind, K::Bullet);
  EXPECT_EQ(lines[3].indent, 2);
  EXPECT_EQ(lines[3].text, "item");
  EXPECT_EQ(lines[4].kind, K::Text);
  EXPECT_EQ(lines[5].kind, K::Heading4);
}

TEST(Markdown, RemovingAHashIsSilent) {
  std::string text = forge::testing::golden("jarvis.md");
  text.erase(text.find("## memory"), 1);
  const auto r = br::from_markdown(text);
  ASSERT_TRUE(r.doc);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_NE(*r.doc, listing());
  EXPECT_TRUE(r.doc->pillars.empty());
}

TEST(Markdown, DeepFormsAreFlattened) {
  const auto doc = in::load("(intent p (design-constraints (r (a (b (c d))))))").doc;
  const auto back = br::from_markdown(br::to_markdown(doc));
  ASSERT_TRUE(back.doc);
  ASSERT_EQ(back.doc->constraints.size(), 1u);
  EXPECT_EQ(sx::print_canonical(back.doc->constraints[0].body), "(r\n  (a b c d))\n");
}

TEST(Markdown, GarbageYieldsEmptyDocument) {
  const auto r = br::from_markdown("just prose\n- stray bullet\n");
  ASSERT_TRUE(r.doc);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(*r.doc, IntentDoc{});
}

// ---- format names

TEST(Formats, NamesAndExtensions) {
  for (Format f : kAll) EXPECT_EQ(br::parse_format(br::format_name(f)), f);
  EXPECT_EQ(br::parse_format("yml"), Format::Yaml);
  EXPECT_FALSE(br::parse_format("toml"));
  EXPECT_EQ(br::format_from_path("a/b.lisp"), Format::Sexpr);
  EXPECT_EQ(br::format_from_path("x.yml"), Format::Yaml);
  EXPECT_EQ(br::format_from_path("x.md"), Format::Markdown);
  EXPECT_EQ(br::format_from_path("x.json"), Format::Json);
  EXPECT_FALSE(br::format_from_path("Makefile"));
}

TEST(Formats, TolerantSexprRecoversDocument) {
  std::string text(forge::corpus::jarvis_listing());
  text.erase(text.rfind(')'), 1);
  EXPECT_FALSE(br::from_format(text, Format::Sexpr).doc);
  const auto r = br::from_format(text, Format::Sexpr, sx::ParseMode::Tolerant);
  ASSERT_TRUE(r.doc);
  EXPECT_EQ(*r.doc, listing());
  EXPECT_TRUE(forge::has_errors(r.diagnostics));
}

}  // namespace
