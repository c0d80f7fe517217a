#pragma once

// The intent.lisp vocabulary:
//
//   (intent NAME
//     (design-constraints (CONSTRAINT-NAME ...) ...)
//     (pillar NAME
//       (purpose "...")
//       (component NAME
//         (role "...") (invariants "...") (data-flow "...")
//         (symbols
//           (function NAME (sig "..."))
//           (type NAME (sig "..."))
//           (constant NAME)))))
//
// Anything else found inside these forms is kept verbatim in the owning
// entity's `extra` list, and its original position is remembered so that
// to_sexpr() reproduces the source form.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/diagnostic.hpp"
#include "forge/sexpr.hpp"

namespace forge::intent {

using sexpr::SNode;

enum class SymbolKind { Function, Type, Constant };

std::string_view kind_name(SymbolKind kind);
std::optional<SymbolKind> parse_kind(std::string_view text);

/// Position of one child form inside its parent, in source order. Used only to
/// reproduce the source layout; never part of equality.
enum class Slot : std::uint8_t {
  Constraints,
  Pillar,
  Purpose,
  Component,
  Role,
  Invariants,
  DataFlow,
  Symbols,
  Decl,
  SymbolsExtra,
  Sig,
  Extra,
};
using Layout = std::vector<Slot>;

struct SymbolDecl {
  SymbolKind kind = SymbolKind::Function;
  std::string name;
  std::optional<std::string> sig;
  std::vector<SNode> extra;

  SourceSpan span;
  Layout layout;

  friend bool operator==(const SymbolDecl& a, const SymbolDecl& b) {
    return a.kind == b.kind && a.name == b.name && a.sig == b.sig && a.extra == b.extra;
  }
};

struct Component {
  std::string name;
  std::optional<std::string> role;
  std::optional<std::string> invariants_text;
  std::optional<std::string> data_flow;
  std::vector<SymbolDecl> symbols;
  std::vector<SNode> symbols_extra;  // non-declaration children of (symbols ...)
  std::vector<SNode> extra;

  SourceSpan span;
  Layout layout;
  Layout symbols_layout;

  friend bool operator==(const Component& a, const Component& b) {
    return a.name == b.name && a.role == b.role && a.invariants_text == b.invariants_text &&
           a.data_flow == b.data_flow && a.symbols == b.symbols &&
           a.symbols_extra == b.symbols_extra && a.extra == b.extra;
  }
};

struct Pillar {
  std::string name;
  std::optional<std::string> purpose;
  std::vector<Component> components;
  std::vector<SNode> extra;

  SourceSpan span;
  Layout layout;

  friend bool operator==(const Pillar& a, const Pillar& b) {
    return a.name == b.name && a.purpose == b.purpose && a.components == b.components &&
           a.extra == b.extra;
  }
};

/// A named rule under design-constraints. `body` is the whole constraint form,
/// head included, and is never interpreted.
struct Constraint {
  std::string name;
  SNode body;

  SourceSpan span;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.name == b.name && a.body == b.body;
  }
};

struct IntentDoc {
  std::string project;
  std::vector<Constraint> constraints;
  std::vector<Pillar> pillars;
  std::vector<SNode> extra;

  std::optional<SNode> source;  // the root this document was built from, if any
  Layout layout;

  /// Equality over content. Spans, layout and source are ignored.
  friend bool operator==(const IntentDoc& a, const IntentDoc& b) {
    return a.project == b.project && a.constraints == b.constraints && a.pillars == b.pillars &&
           a.extra == b.extra;
  }
};

struct BuildResult {
  IntentDoc doc;
  std::vector<Diagnostic> diagnostics;
};

/// Build a document from one `(intent ...)` form.
BuildResult build(const SNode& root);

/// Build from a whole parse: the first root is the document, any further roots
/// are reported as EXTRA_FORM warnings. No roots yields NOT_INTENT.
BuildResult build(std::span<const SNode> roots);

/// Parse strictly and build. Parse errors are returned as the diagnostics of an
/// empty document.
BuildResult load(std::string_view text);

SNode to_sexpr(const IntentDoc& doc);
SNode to_sexpr(const Pillar& pillar);
SNode to_sexpr(const Component& component);
SNode to_sexpr(const SymbolDecl& decl);

/// Canonical intent.lisp text of a document.
std::string print(const IntentDoc& doc);

/// Schema checks, in document order:
///  - a component with neither a role nor symbols (EMPTY_COMPONENT, warning)
///  - a function or type without a sig (MISSING_SIG, warning)
///  - a three-pillars constraint that does not name exactly the declared
///    pillars (PILLAR_MISMATCH, error)
std::vector<Diagnostic> validate(const IntentDoc& doc);

std::size_t symbol_count(const IntentDoc& doc);

}  // namespace forge::intent
