#include <gtest/gtest.h>

#include <algorithm>

#include "forge/corpus.hpp"
#include "forge/intent.hpp"
#include "forge/sexpr.hpp"
#include "support/golden.hpp"

namespace {

using forge::DiagCode;
using forge::Severity;
using forge::intent::SymbolKind;
namespace in = forge::intent;
namespace sx = forge::sexpr;

bool has_code(const std::vector<forge::Diagnostic>& ds, DiagCode code) {
  return std::any_of(ds.begin(), ds.end(), [&](const auto& d) { return d.code == code; });
}

TEST(Build, ListingFields) {
  const auto r = in::load(forge::corpus::jarvis_listing());
  EXPECT_FALSE(forge::has_errors(r.diagnostics));
  const auto& doc = r.doc;
  EXPECT_EQ(doc.project, "jarvis");
  ASSERT_EQ(doc.constraints.size(), 3u);
  EXPECT_EQ(doc.constraints[0].name, "three-pillars");
  EXPECT_EQ(doc.constraints[1].name, "communication");
  EXPECT_EQ(doc.constraints[2].name, "db-access");
  ASSERT_EQ(doc.pillars.size(), 1u);
  const auto& p = doc.pillars[0];
  EXPECT_EQ(p.name, "memory");
  EXPECT_EQ(p.purpose, "Data capture, storage, analysis");
  ASSERT_EQ(p.components.size(), 1u);
  const auto& c = p.components[0];
  EXPECT_EQ(c.name, "storage");
  EXPECT_EQ(c.role, "SOLE DB gateway");
  EXPECT_EQ(c.invariants_text, "No raw SQL outside this module");
  EXPECT_EQ(c.data_flow, "Event -> Storage -> PostgreSQL");
  ASSERT_EQ(c.symbols.size(), 1u);
  EXPECT_EQ(c.symbols[0].kind, SymbolKind::Function);
  EXPECT_EQ(c.symbols[0].name, "save_message");
  EXPECT_EQ(c.symbols[0].sig, "async fn save_message(&self, ...)");
  EXPECT_TRUE(doc.extra.empty());
  EXPECT_EQ(in::symbol_count(doc), 1u);
}

TEST(Build, ConstantWithoutSig) {
  const auto r = in::load("(intent p (pillar a (component b (symbols (constant MAX)))))");
  EXPECT_TRUE(r.diagnostics.empty());
  const auto& s = r.doc.pillars[0].components[0].symbols[0];
  EXPECT_EQ(s.kind, SymbolKind::Constant);
  EXPECT_EQ(s.name, "MAX");
  EXPECT_FALSE(s.sig.has_value());
}

TEST(Build, DuplicatePillar) {
  const auto r = in::load("(intent p (pillar a) (pillar a))");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::DuplicateName);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::Error);
  // Points at the second pillar.
  EXPECT_EQ(r.diagnostics[0].span.begin, 21u);
}

TEST(Build, DuplicateComponentAndConstraint) {
  EXPECT_TRUE(has_code(in::load("(intent p (pillar a (component x) (component x)))").diagnostics,
                       DiagCode::DuplicateName));
  EXPECT_TRUE(has_code(in::load("(intent p (design-constraints (r a) (r b)))").diagnostics,
                       DiagCode::DuplicateName));
}

TEST(Build, NotIntentAndMissingName) {
  auto a = in::load("(project p)");
  ASSERT_EQ(a.diagnostics.size(), 1u);
  EXPECT_EQ(a.diagnostics[0].code, DiagCode::NotIntent);
  EXPECT_EQ(in::load("").diagnostics[0].code, DiagCode::NotIntent);
  EXPECT_TRUE(has_code(in::load("(intent (pillar a))").diagnostics, DiagCode::MissingName));
  EXPECT_TRUE(has_code(in::load("(intent p (pillar))").diagnostics, DiagCode::MissingName));
}

TEST(Build, ShapeErrors) {
  EXPECT_TRUE(has_code(in::load("(intent p (pillar a (purpose x)))").diagnostics, DiagCode::BadShape));
  EXPECT_TRUE(has_code(in::load("(intent p (pillar a (component c (function f))))").diagnostics,
                       DiagCode::BadShape));
  EXPECT_TRUE(has_code(in::load("(intent p (pillar a (role \"r\")))").diagnostics, DiagCode::BadShape));
}

TEST(Build, ExtraTopLevelFormWarns) {
  const auto r = in::load("(intent p) (note)");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::ExtraForm);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::Warning);
}

TEST(Build, ParseErrorsSurface) {
  const auto r = in::load("(intent p");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, DiagCode::UnclosedList);
}

TEST(Lossless, UnknownHeadsAreKept) {
  const std::string text =
      "(intent p\n"
      "  (owner \"ops\")\n"
      "  (pillar a\n"
      "    (tags x y)\n"
      "    (component c\n"
      "      (since 3)\n"
      "      (role \"r\")\n"
      "      (symbols\n"
      "        (note \"n\")\n"
      "        (function f\n"
      "          (sig \"f()\")\n"
      "          (stability\n"
      "            (level beta)))))))\n";
  const auto r = in::load(text);
  EXPECT_FALSE(forge::has_errors(r.diagnostics));
  EXPECT_EQ(std::count_if(r.diagnostics.begin(), r.diagnostics.end(),
                          [](const auto& d) { return d.code == DiagCode::UnknownHead; }),
            5);
  ASSERT_EQ(r.doc.extra.size(), 1u);
  EXPECT_EQ(r.doc.pillars[0].extra.size(), 1u);
  EXPECT_EQ(r.doc.pillars[0].components[0].extra.size(), 1u);
  EXPECT_EQ(r.doc.pillars[0].components[0].symbols_extra.size(), 1u);
  EXPECT_EQ(r.doc.pillars[0].components[0].symbols[0].extra.size(), 1u);
  const auto parsed = sx::parse_strict(text);
  EXPECT_EQ(in::to_sexpr(r.doc), parsed.roots[0]);
  EXPECT_EQ(in::print(r.doc), text);
}

TEST(Lossless, SourceOrderIsReproduced) {
  const std::string text = "(intent p (pillar b) (design-constraints (x)) (pillar a (component c (role \"r\") (tag t))))";
  const auto r = in::load(text);
  EXPECT_EQ(in::to_sexpr(r.doc), sx::parse_strict(text).roots[0]);
}

TEST(Lossless, DuplicateAttributeGoesToExtra) {
  const std::string text = "(intent p (pillar a (purpose \"x\") (purpose \"y\")))";
  const auto r = in::load(text);
  EXPECT_TRUE(has_code(r.diagnostics, DiagCode::DuplicateAttr));
  EXPECT_EQ(r.doc.pillars[0].purpose, "x");
  EXPECT_EQ(in::to_sexpr(r.doc), sx::parse_strict(text).roots[0]);
}

TEST(Lossless, ListingPrintsCanonicalGolden) {
  const auto r = in::load(forge::corpus::jarvis_listing());
  EXPECT_EQ(in::print(r.doc), forge::testing::golden("jarvis.canonical.lisp"));
  EXPECT_EQ(in::to_sexpr(r.doc), sx::parse_strict(forge::corpus::jarvis_listing()).roots[0]);
}

TEST(Lossless, RandomDocsRebuildEqual) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto doc = forge::corpus::random_doc(seed);
    const auto r = in::load(in::print(doc));
    EXPECT_FALSE(forge::has_errors(r.diagnostics)) << seed;
    EXPECT_EQ(r.doc, doc) << seed;
    EXPECT_EQ(in::print(r.doc), in::print(doc));
  }
}

TEST(Validate, ListingNamesUndeclaredPillars) {
  const auto r = in::load(forge::corpus::jarvis_listing());
  const auto ds = in::validate(r.doc);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, DiagCode::PillarMismatch);
  EXPECT_EQ(ds[0].severity, Severity::Error);
  EXPECT_NE(ds[0].message.find("control tools"), std::string::npos);
  EXPECT_EQ(ds[0].span.start_line, 3);
  EXPECT_EQ(ds[0].span.start_col, 5);
}

TEST(Validate, MatchingPillarsPass) {
  const auto r = in::load(
      "(intent p (design-constraints (three-pillars (a b))) (pillar a (component x (role \"r\")))"
      " (pillar b (component y (role \"r\"))))");
  EXPECT_TRUE(in::validate(r.doc).empty());
}

TEST(Validate, DeclaredButNotListed) {
  const auto r = in::load("(intent p (design-constraints (three-pillars (a))) (pillar a) (pillar z))");
  const auto ds = in::validate(r.doc);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_NE(ds[0].message.find("declared but not listed: z"), std::string::npos);
}

TEST(Validate, WarningsInDocumentOrder) {
  const auto r = in::load(
      "(intent p (pillar a (component empty) (component c (symbols (function f) (type T (sig \"T\")) "
      "(constant K) (type U)))))");
  const auto ds = in::validate(r.doc);
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds[0].code, DiagCode::EmptyComponent);
  EXPECT_EQ(ds[1].code, DiagCode::MissingSig);
  EXPECT_NE(ds[1].message.find("a/c/f"), std::string::npos);
  EXPECT_EQ(ds[2].code, DiagCode::MissingSig);
  EXPECT_NE(ds[2].message.find("a/c/U"), std::string::npos);
  for (const auto& d : ds) EXPECT_EQ(d.severity, Severity::Warning);
}

TEST(Kinds, NamesRoundTrip) {
  for (auto k : {SymbolKind::Function, SymbolKind::Type, SymbolKind::Constant}) {
    EXPECT_EQ(in::parse_kind(in::kind_name(k)), k);
  }
  EXPECT_FALSE(in::parse_kind("macro").has_value());
}

}  // namespace
