#include <string>
#include <vector>

#include "forge/bridge.hpp"

namespace forge::bridge {

using intent::Component;
using intent::Pillar;
using intent::SymbolDecl;
using sexpr::SNode;

namespace {

void append_atoms(const SNode& n, std::vector<std::string>& out) {
  if (n.is_atom()) {
    out.push_back(sexpr::spell_atom(n));
    return;
  }
  for (const auto& c : n.children) append_atoms(c, out);
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

// Lists below the second level are spliced into their parent.
std::string inline_form(const SNode& n, int level) {
  if (n.is_atom()) return sexpr::spell_atom(n);
  std::vector<std::string> parts;
  for (const auto& c : n.children) {
    if (c.is_atom()) {
      parts.push_back(sexpr::spell_atom(c));
    } else if (level < 2) {
      parts.push_back(inline_form(c, level + 1));
    } else {
      std::vector<std::string> atoms;
      append_atoms(c, atoms);
      if (!atoms.empty()) parts.push_back(join(atoms));
    }
  }
  return "(" + join(parts) + ")";
}

std::string constraint_text(const SNode& body) {
  const std::string f = inline_form(body, 1);
  return f.substr(1, f.size() - 2);
}

struct Section {
  std::vector<std::string> text;
  std::vector<std::string> bullets;
};

void emit(std::vector<std::string>& out, const std::string& heading, const Section& s) {
  if (!out.empty()) out.emplace_back();
  out.push_back(heading);
  if (!s.text.empty()) {
    out.emplace_back();
    out.insert(out.end(), s.text.begin(), s.text.end());
  }
  if (!s.bullets.empty()) {
    out.emplace_back();
    out.insert(out.end(), s.bullets.begin(), s.bullets.end());
  }
}

void extras(const std::vector<SNode>& forms, const char* prefix, std::vector<std::string>& out) {
  for (const auto& f : forms) out.push_back(prefix + inline_form(f, 1));
}

std::string first_word(std::string_view s) {
  const auto sp = s.find(' ');
  return std::string(s.substr(0, sp));
}

std::optional<SNode> read_form(std::string_view text) {
  auto parsed = sexpr::parse_strict(text);
  if (!parsed.ok() || parsed.roots.size() != 1) return std::nullopt;
  return std::move(parsed.roots[0]);
}

std::optional<std::string> attribute(std::string_view line, std::string_view key) {
  if (line.substr(0, key.size()) != key) return std::nullopt;
  std::string_view rest = line.substr(key.size());
  if (rest.empty()) return std::string();
  if (rest.front() != ' ') return std::nullopt;
  return std::string(rest.substr(1));
}

}  // namespace

std::vector<MarkdownLine> split_markdown(std::string_view text) {
  std::vector<MarkdownLine> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.find_first_not_of(" \t") == std::string_view::npos) {
      if (nl == text.size()) break;
      continue;
    }
    MarkdownLine line{MarkdownLine::Kind::Text, 0, std::string(raw)};
    std::size_t hashes = 0;
    while (hashes < raw.size() && raw[hashes] == '#') ++hashes;
    const std::size_t indent = raw.find_first_not_of(' ');
    if (hashes >= 1 && hashes <= 4 && hashes < raw.size() && raw[hashes] == ' ') {
      line.kind = static_cast<MarkdownLine::Kind>(hashes - 1);
      line.text = std::string(raw.substr(hashes + 1));
    } else if (raw.substr(indent, 2) == "- ") {
      line.kind = MarkdownLine::Kind::Bullet;
      line.indent = static_cast<int>(indent);
      line.text = std::string(raw.substr(indent + 2));
    }
    lines.push_back(std::move(line));
    if (nl == text.size()) break;
  }
  return lines;
}

std::string to_markdown(const IntentDoc& doc) {
  std::vector<std::string> out;
  Section top;
  for (const auto& c : doc.constraints) top.bullets.push_back("- constraint " + constraint_text(c.body));
  extras(doc.extra, "- extra ", top.bullets);
  emit(out, "# " + doc.project, top);

  for (const Pillar& p : doc.pillars) {
    Section s;
    if (p.purpose) s.text.push_back("Purpose: " + *p.purpose);
    extras(p.extra, "- extra ", s.bullets);
    emit(out, "## " + p.name, s);

    for (const Component& c : p.components) {
      Section cs;
      if (c.role) cs.text.push_back("Role: " + *c.role);
      if (c.invariants_text) cs.text.push_back("Invariants: " + *c.invariants_text);
      if (c.data_flow) cs.text.push_back("Data-flow: " + *c.data_flow);
      extras(c.extra, "- extra ", cs.bullets);
      extras(c.symbols_extra, "- symbols-extra ", cs.bullets);
      for (const SymbolDecl& d : c.symbols) {
        std::string b = "- " + std::string(intent::kind_name(d.kind)) + " " + d.name;
        if (d.sig) b += ": " + *d.sig;
        cs.bullets.push_back(std::move(b));
        extras(d.extra, "  - extra ", cs.bullets);
      }
      emit(out, "### " + c.name, cs);
    }
  }

  std::string text;
  for (const auto& l : out) {
    text += l;
    text += '\n';
  }
  return text;
}

ConvertResult from_markdown(std::string_view text) {
  enum class Scope { None, Intent, Pillar, Component };
  IntentDoc doc;
  Scope scope = Scope::None;
  SymbolDecl* last_symbol = nullptr;

  auto pillar = [&]() -> Pillar& { return doc.pillars.back(); };
  auto component = [&]() -> Component& { return doc.pillars.back().components.back(); };

  for (const MarkdownLine& line : split_markdown(text)) {
    using K = MarkdownLine::Kind;
    if (line.kind != K::Bullet || line.indent == 0) {
      if (line.kind != K::Bullet || first_word(line.text) != "extra") last_symbol = nullptr;
    }
    switch (line.kind) {
      case K::Heading1: {
        const std::string name = first_word(line.text);
        doc.project = sexpr::is_valid_symbol(name) ? name : std::string();
        scope = Scope::Intent;
        break;
      }
      case K::Heading2: {
        const std::string name = first_word(line.text);
        if (!sexpr::is_valid_symbol(name)) {
          scope = Scope::None;
          break;
        }
        doc.pillars.push_back(Pillar{name, {}, {}, {}, {}, {}});
        scope = Scope::Pillar;
        break;
      }
      case K::Heading3: {
        const std::string name = first_word(line.text);
        if (doc.pillars.empty() || scope == Scope::None || scope == Scope::Intent ||
            !sexpr::is_valid_symbol(name)) {
          scope = Scope::None;
          break;
        }
        Component c;
        c.name = name;
        pillar().components.push_back(std::move(c));
        scope = Scope::Component;
        break;
      }
      case K::Heading4:
        break;
      case K::Text: {
        if (scope == Scope::Pillar) {
          if (auto v = attribute(line.text, "Purpose:")) pillar().purpose = *v;
        } else if (scope == Scope::Component) {
          if (auto v = attribute(line.text, "Role:")) component().role = *v;
          else if (auto v2 = attribute(line.text, "Invariants:")) component().invariants_text = *v2;
          else if (auto v3 = attribute(line.text, "Data-flow:")) component().data_flow = *v3;
        }
        break;
      }
      case K::Bullet: {
        const std::string word = first_word(line.text);
        const std::string_view rest =
            word.size() < line.text.size() ? std::string_view(line.text).substr(word.size() + 1)
                                           : std::string_view();
        if (line.indent > 0) {
          if (word == "extra" && last_symbol != nullptr) {
            if (auto f = read_form(rest)) last_symbol->extra.push_back(std::move(*f));
          }
          break;
        }
        if (word == "extra") {
          auto f = read_form(rest);
          if (!f) break;
          if (scope == Scope::Intent) doc.extra.push_back(std::move(*f));
          else if (scope == Scope::Pillar) pillar().extra.push_back(std::move(*f));
          else if (scope == Scope::Component) component().extra.push_back(std::move(*f));
        } else if (word == "constraint" && scope == Scope::Intent) {
          auto f = read_form("(" + std::string(rest) + ")");
          if (f && !f->children.empty() && f->children[0].is_symbol()) {
            doc.constraints.push_back(intent::Constraint{f->children[0].text, std::move(*f), {}});
          }
        } else if (word == "symbols-extra" && scope == Scope::Component) {
          if (auto f = read_form(rest)) component().symbols_extra.push_back(std::move(*f));
        } else if (auto kind = intent::parse_kind(word); kind && scope == Scope::Component) {
          SymbolDecl d;
          d.kind = *kind;
          const auto sp = rest.find(' ');
          std::string name(rest.substr(0, sp));
          if (sp != std::string_view::npos) {
            if (!name.empty() && name.back() == ':') {
              name.pop_back();
              d.sig = std::string(rest.substr(sp + 1));
            }
          }
          if (!sexpr::is_valid_symbol(name)) break;
          d.name = std::move(name);
          component().symbols.push_back(std::move(d));
          last_symbol = &component().symbols.back();
        }
        break;
      }
    }
  }
  return ConvertResult{std::move(doc), {}};
}

}  // namespace forge::bridge
