#include "forge/intent.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <fmt/format.h>

namespace forge::intent {

std::string_view kind_name(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Function: return "function";
    case SymbolKind::Type: return "type";
    case SymbolKind::Constant: return "constant";
  }
  return "function";
}

std::optional<SymbolKind> parse_kind(std::string_view text) {
  if (text == "function") return SymbolKind::Function;
  if (text == "type") return SymbolKind::Type;
  if (text == "constant") return SymbolKind::Constant;
  return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, 13> kKnownHeads = {
    "intent", "design-constraints", "pillar",  "purpose",  "component", "role",  "invariants",
    "data-flow", "symbols",         "function", "type",     "constant",  "sig"};

bool is_known_head(std::string_view head) {
  return std::find(kKnownHeads.begin(), kKnownHeads.end(), head) != kKnownHeads.end();
}

// `(head "text")`
std::optional<std::string> string_attr(const SNode& form) {
  if (form.children.size() == 2 && form.children[1].is_string()) return form.children[1].text;
  return std::nullopt;
}

// `(head NAME ...)`
std::optional<std::string> form_name(const SNode& form) {
  if (form.children.size() >= 2 && form.children[1].is_symbol()) return form.children[1].text;
  return std::nullopt;
}

class Builder {
 public:
  BuildResult run(const SNode& root) {
    BuildResult result;
    IntentDoc& doc = result.doc;
    doc.source = root;
    if (root.head() != "intent") {
      error(DiagCode::NotIntent, root.span, "top-level form is not (intent ...)");
      result.diagnostics = std::move(diags_);
      return result;
    }
    std::size_t first = 1;
    if (auto name = form_name(root)) {
      doc.project = *name;
      first = 2;
    } else {
      error(DiagCode::MissingName, root.span, "(intent ...) has no project name");
      if (root.children.size() >= 2 && root.children[1].is_atom()) first = 2;
    }
    bool have_constraints = false;
    std::set<std::string> pillar_names;
    for (std::size_t i = first; i < root.children.size(); ++i) {
      const SNode& child = root.children[i];
      const std::string_view head = child.head();
      if (head == "design-constraints" && !have_constraints) {
        have_constraints = true;
        build_constraints(child, doc.constraints);
        doc.layout.push_back(Slot::Constraints);
      } else if (head == "pillar") {
        if (auto pillar = build_pillar(child)) {
          if (!pillar_names.insert(pillar->name).second) {
            error(DiagCode::DuplicateName, child.span,
                  fmt::format("pillar '{}' is declared more than once", pillar->name));
          }
          doc.pillars.push_back(std::move(*pillar));
          doc.layout.push_back(Slot::Pillar);
        } else {
          keep_extra(child, doc.extra, doc.layout);
        }
      } else {
        if (head == "design-constraints") {
          warning(DiagCode::DuplicateAttr, child.span, "second (design-constraints ...) kept as extra");
        } else {
          classify_unexpected(child, "intent");
        }
        keep_extra(child, doc.extra, doc.layout);
      }
    }
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  void error(DiagCode code, const SourceSpan& span, std::string message) {
    diags_.push_back(make_error(code, span, std::move(message)));
  }
  void warning(DiagCode code, const SourceSpan& span, std::string message) {
    diags_.push_back(make_warning(code, span, std::move(message)));
  }

  static void keep_extra(const SNode& node, std::vector<SNode>& extra, Layout& layout,
                         Slot slot = Slot::Extra) {
    extra.push_back(node);
    layout.push_back(slot);
  }

  // Report a child that is not a recognized attribute of `where`.
  void classify_unexpected(const SNode& child, std::string_view where) {
    const std::string_view head = child.head();
    if (child.is_atom()) {
      warning(DiagCode::UnknownHead, child.span, fmt::format("unexpected atom in {}", where));
    } else if (head.empty()) {
      warning(DiagCode::UnknownHead, child.span, fmt::format("list without a symbol head in {}", where));
    } else if (is_known_head(head)) {
      error(DiagCode::BadShape, child.span, fmt::format("({} ...) is not allowed in {}", head, where));
    } else {
      warning(DiagCode::UnknownHead, child.span, fmt::format("unknown head '{}' in {}", head, where));
    }
  }

  // A known single-string attribute. Returns true if it was taken.
  bool take_string(const SNode& child, std::optional<std::string>& field, std::string_view where) {
    if (field) {
      warning(DiagCode::DuplicateAttr, child.span,
              fmt::format("second ({} ...) in {} kept as extra", child.head(), where));
      return false;
    }
    if (auto value = string_attr(child)) {
      field = std::move(value);
      return true;
    }
    error(DiagCode::BadShape, child.span, fmt::format("({} ...) must hold exactly one string", child.head()));
    return false;
  }

  void build_constraints(const SNode& form, std::vector<Constraint>& out) {
    std::set<std::string> names;
    for (std::size_t i = 1; i < form.children.size(); ++i) {
      const SNode& child = form.children[i];
      if (child.head().empty()) {
        error(DiagCode::BadShape, child.span, "a design constraint must be a list headed by its name");
        continue;
      }
      Constraint c{std::string(child.head()), child, child.span};
      if (!names.insert(c.name).second) {
        error(DiagCode::DuplicateName, child.span,
              fmt::format("constraint '{}' is declared more than once", c.name));
      }
      out.push_back(std::move(c));
    }
  }

  std::optional<Pillar> build_pillar(const SNode& form) {
    auto name = form_name(form);
    if (!name) {
      error(DiagCode::MissingName, form.span, "(pillar ...) has no name");
      return std::nullopt;
    }
    Pillar pillar;
    pillar.name = *name;
    pillar.span = form.span;
    std::set<std::string> component_names;
    const std::string where = fmt::format("pillar '{}'", pillar.name);
    for (std::size_t i = 2; i < form.children.size(); ++i) {
      const SNode& child = form.children[i];
      const std::string_view head = child.head();
      if (head == "purpose") {
        if (take_string(child, pillar.purpose, where)) {
          pillar.layout.push_back(Slot::Purpose);
          continue;
        }
      } else if (head == "component") {
        if (auto component = build_component(child)) {
          if (!component_names.insert(component->name).second) {
            error(DiagCode::DuplicateName, child.span,
                  fmt::format("component '{}' is declared more than once in {}", component->name, where));
          }
          pillar.components.push_back(std::move(*component));
          pillar.layout.push_back(Slot::Component);
          continue;
        }
      } else {
        classify_unexpected(child, where);
      }
      keep_extra(child, pillar.extra, pillar.layout);
    }
    return pillar;
  }

  std::optional<Component> build_component(const SNode& form) {
    auto name = form_name(form);
    if (!name) {
      error(DiagCode::MissingName, form.span, "(component ...) has no name");
      return std::nullopt;
    }
    Component component;
    component.name = *name;
    component.span = form.span;
    bool have_symbols = false;
    const std::string where = fmt::format("component '{}'", component.name);
    for (std::size_t i = 2; i < form.children.size(); ++i) {
      const SNode& child = form.children[i];
      const std::string_view head = child.head();
      if (head == "role") {
        if (take_string(child, component.role, where)) {
          component.layout.push_back(Slot::Role);
          continue;
        }
      } else if (head == "invariants") {
        if (take_string(child, component.invariants_text, where)) {
          component.layout.push_back(Slot::Invariants);
          continue;
        }
      } else if (head == "data-flow") {
        if (take_string(child, component.data_flow, where)) {
          component.layout.push_back(Slot::DataFlow);
          continue;
        }
      } else if (head == "symbols") {
        if (!have_symbols) {
          have_symbols = true;
          build_symbols(child, component);
          component.layout.push_back(Slot::Symbols);
          continue;
        }
        warning(DiagCode::DuplicateAttr, child.span, fmt::format("second (symbols ...) in {} kept as extra", where));
      } else if (parse_kind(head)) {
        error(DiagCode::BadShape, child.span,
              fmt::format("({} ...) in {} must be inside (symbols ...)", head, where));
      } else {
        classify_unexpected(child, where);
      }
      keep_extra(child, component.extra, component.layout);
    }
    return component;
  }

  void build_symbols(const SNode& form, Component& component) {
    for (std::size_t i = 1; i < form.children.size(); ++i) {
      const SNode& child = form.children[i];
      if (auto kind = parse_kind(child.head())) {
        if (auto decl = build_decl(child, *kind)) {
          component.symbols.push_back(std::move(*decl));
          component.symbols_layout.push_back(Slot::Decl);
          continue;
        }
      } else {
        classify_unexpected(child, "symbols");
      }
      keep_extra(child, component.symbols_extra, component.symbols_layout, Slot::SymbolsExtra);
    }
  }

  std::optional<SymbolDecl> build_decl(const SNode& form, SymbolKind kind) {
    auto name = form_name(form);
    if (!name) {
      error(DiagCode::MissingName, form.span, fmt::format("({} ...) has no name", kind_name(kind)));
      return std::nullopt;
    }
    SymbolDecl decl;
    decl.kind = kind;
    decl.name = *name;
    decl.span = form.span;
    const std::string where = fmt::format("{} '{}'", kind_name(kind), decl.name);
    for (std::size_t i = 2; i < form.children.size(); ++i) {
      const SNode& child = form.children[i];
      if (child.head() == "sig") {
        if (take_string(child, decl.sig, where)) {
          decl.layout.push_back(Slot::Sig);
          continue;
        }
      } else {
        classify_unexpected(child, where);
      }
      keep_extra(child, decl.extra, decl.layout);
    }
    return decl;
  }

  std::vector<Diagnostic> diags_;
};

SNode string_form(std::string_view head, const std::string& value) {
  return SNode::list({SNode::symbol(std::string(head)), SNode::string(value)});
}

// Replays `layout`, then appends whatever it did not account for in canonical
// order. `emit(slot, index)` appends the index-th item of that slot's sequence;
// `count(slot)` is the number of items available for slot.
template <typename Emit, typename Count>
void replay(const Layout& layout, std::span<const Slot> canonical, Emit emit, Count count) {
  std::array<std::size_t, 16> used{};
  for (Slot slot : layout) {
    auto& n = used[static_cast<std::size_t>(slot)];
    if (n < count(slot)) emit(slot, n++);
  }
  for (Slot slot : canonical) {
    auto& n = used[static_cast<std::size_t>(slot)];
    while (n < count(slot)) emit(slot, n++);
  }
}

}  // namespace

BuildResult build(const SNode& root) { return Builder().run(root); }

BuildResult build(std::span<const SNode> roots) {
  if (roots.empty()) {
    BuildResult result;
    result.diagnostics.push_back(make_error(DiagCode::NotIntent, {}, "document contains no forms"));
    return result;
  }
  BuildResult result = build(roots.front());
  for (std::size_t i = 1; i < roots.size(); ++i) {
    result.diagnostics.push_back(
        make_warning(DiagCode::ExtraForm, roots[i].span, "top-level form after the (intent ...) form ignored"));
  }
  return result;
}

BuildResult load(std::string_view text) {
  auto parsed = sexpr::parse_strict(text);
  if (!parsed.ok()) return BuildResult{{}, std::move(parsed.diagnostics)};
  return build(std::span<const SNode>(parsed.roots));
}

SNode to_sexpr(const SymbolDecl& decl) {
  SNode form = SNode::list({SNode::symbol(std::string(kind_name(decl.kind))), SNode::symbol(decl.name)});
  static constexpr Slot canonical[] = {Slot::Sig, Slot::Extra};
  replay(
      decl.layout, canonical,
      [&](Slot slot, std::size_t i) {
        if (slot == Slot::Sig) form.children.push_back(string_form("sig", *decl.sig));
        else form.children.push_back(decl.extra[i]);
      },
      [&](Slot slot) -> std::size_t {
        if (slot == Slot::Sig) return decl.sig ? 1 : 0;
        if (slot == Slot::Extra) return decl.extra.size();
        return 0;
      });
  return form;
}

SNode to_sexpr(const Component& c) {
  SNode form = SNode::list({SNode::symbol("component"), SNode::symbol(c.name)});
  const bool symbols_in_layout = std::find(c.layout.begin(), c.layout.end(), Slot::Symbols) != c.layout.end();
  const bool has_symbols = !c.symbols.empty() || !c.symbols_extra.empty() || symbols_in_layout;
  static constexpr Slot canonical[] = {Slot::Role, Slot::Invariants, Slot::DataFlow, Slot::Symbols, Slot::Extra};
  replay(
      c.layout, canonical,
      [&](Slot slot, std::size_t i) {
        switch (slot) {
          case Slot::Role: form.children.push_back(string_form("role", *c.role)); break;
          case Slot::Invariants: form.children.push_back(string_form("invariants", *c.invariants_text)); break;
          case Slot::DataFlow: form.children.push_back(string_form("data-flow", *c.data_flow)); break;
          case Slot::Symbols: {
            SNode symbols = SNode::list({SNode::symbol("symbols")});
            static constexpr Slot inner[] = {Slot::Decl, Slot::SymbolsExtra};
            replay(
                c.symbols_layout, inner,
                [&](Slot s, std::size_t j) {
                  if (s == Slot::Decl) symbols.children.push_back(to_sexpr(c.symbols[j]));
                  else symbols.children.push_back(c.symbols_extra[j]);
                },
                [&](Slot s) -> std::size_t {
                  if (s == Slot::Decl) return c.symbols.size();
                  if (s == Slot::SymbolsExtra) return c.symbols_extra.size();
                  return 0;
                });
            form.children.push_back(std::move(symbols));
            break;
          }
          default: form.children.push_back(c.extra[i]); break;
        }
      },
      [&](Slot slot) -> std::size_t {
        switch (slot) {
          case Slot::Role: return c.role ? 1 : 0;
          case Slot::Invariants: return c.invariants_text ? 1 : 0;
          case Slot::DataFlow: return c.data_flow ? 1 : 0;
          case Slot::Symbols: return has_symbols ? 1 : 0;
          case Slot::Extra: return c.extra.size();
          default: return 0;
        }
      });
  return form;
}

SNode to_sexpr(const Pillar& p) {
  SNode form = SNode::list({SNode::symbol("pillar"), SNode::symbol(p.name)});
  static constexpr Slot canonical[] = {Slot::Purpose, Slot::Component, Slot::Extra};
  replay(
      p.layout, canonical,
      [&](Slot slot, std::size_t i) {
        if (slot == Slot::Purpose) form.children.push_back(string_form("purpose", *p.purpose));
        else if (slot == Slot::Component) form.children.push_back(to_sexpr(p.components[i]));
        else form.children.push_back(p.extra[i]);
      },
      [&](Slot slot) -> std::size_t {
        if (slot == Slot::Purpose) return p.purpose ? 1 : 0;
        if (slot == Slot::Component) return p.components.size();
        if (slot == Slot::Extra) return p.extra.size();
        return 0;
      });
  return form;
}

SNode to_sexpr(const IntentDoc& doc) {
  SNode form = SNode::list({SNode::symbol("intent")});
  if (!doc.project.empty()) form.children.push_back(SNode::symbol(doc.project));
  const bool constraints_in_layout =
      std::find(doc.layout.begin(), doc.layout.end(), Slot::Constraints) != doc.layout.end();
  static constexpr Slot canonical[] = {Slot::Constraints, Slot::Pillar, Slot::Extra};
  replay(
      doc.layout, canonical,
      [&](Slot slot, std::size_t i) {
        if (slot == Slot::Constraints) {
          SNode dc = SNode::list({SNode::symbol("design-constraints")});
          for (const auto& c : doc.constraints) dc.children.push_back(c.body);
          form.children.push_back(std::move(dc));
        } else if (slot == Slot::Pillar) {
          form.children.push_back(to_sexpr(doc.pillars[i]));
        } else {
          form.children.push_back(doc.extra[i]);
        }
      },
      [&](Slot slot) -> std::size_t {
        if (slot == Slot::Constraints) return (!doc.constraints.empty() || constraints_in_layout) ? 1 : 0;
        if (slot == Slot::Pillar) return doc.pillars.size();
        if (slot == Slot::Extra) return doc.extra.size();
        return 0;
      });
  return form;
}

std::string print(const IntentDoc& doc) { return sexpr::print_canonical(to_sexpr(doc)); }

namespace {

void collect_atoms(const SNode& node, std::vector<std::string>& out) {
  if (node.is_atom()) {
    out.push_back(node.text);
    return;
  }
  for (const auto& child : node.children) collect_atoms(child, out);
}

}  // namespace

std::vector<Diagnostic> validate(const IntentDoc& doc) {
  std::vector<Diagnostic> out;
  std::set<std::string> declared;
  for (const auto& p : doc.pillars) declared.insert(p.name);

  for (const auto& c : doc.constraints) {
    if (c.name != "three-pillars") continue;
    std::vector<std::string> atoms;
    for (std::size_t i = 1; i < c.body.children.size(); ++i) collect_atoms(c.body.children[i], atoms);
    const std::set<std::string> listed(atoms.begin(), atoms.end());
    if (listed == declared) continue;
    std::vector<std::string> missing, undeclared;
    std::set_difference(listed.begin(), listed.end(), declared.begin(), declared.end(),
                        std::back_inserter(missing));
    std::set_difference(declared.begin(), declared.end(), listed.begin(), listed.end(),
                        std::back_inserter(undeclared));
    std::string message = "three-pillars does not match the declared pillars";
    if (!missing.empty()) message += fmt::format("; listed but not declared: {}", fmt::join(missing, " "));
    if (!undeclared.empty()) message += fmt::format("; declared but not listed: {}", fmt::join(undeclared, " "));
    out.push_back(make_error(DiagCode::PillarMismatch, c.span, std::move(message)));
  }

  for (const auto& p : doc.pillars) {
    for (const auto& c : p.components) {
      if (!c.role && c.symbols.empty()) {
        out.push_back(make_warning(DiagCode::EmptyComponent, c.span,
                                   fmt::format("component '{}/{}' has neither a role nor symbols", p.name, c.name)));
      }
      for (const auto& s : c.symbols) {
        if (s.kind != SymbolKind::Constant && !s.sig) {
          out.push_back(make_warning(DiagCode::MissingSig, s.span,
                                     fmt::format("{} '{}/{}/{}' has no sig", kind_name(s.kind), p.name, c.name, s.name)));
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.span.begin < b.span.begin; });
  return out;
}

std::size_t symbol_count(const IntentDoc& doc) {
  std::size_t n = 0;
  for (const auto& p : doc.pillars)
    for (const auto& c : p.components) n += c.symbols.size();
  return n;
}

}  // namespace forge::intent
