#include "forge/bridge.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "forge/yaml.hpp"

namespace forge::bridge {

using intent::Component;
using intent::Constraint;
using intent::Pillar;
using intent::SymbolDecl;
using json::Value;
using sexpr::SNode;

std::string_view format_name(Format format) {
  switch (format) {
    case Format::Sexpr: return "sexpr";
    case Format::Json: return "json";
    case Format::Yaml: return "yaml";
    case Format::Markdown: return "md";
  }
  return "sexpr";
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "sexpr" || name == "lisp") return Format::Sexpr;
  if (name == "json") return Format::Json;
  if (name == "yaml" || name == "yml") return Format::Yaml;
  if (name == "md" || name == "markdown") return Format::Markdown;
  return std::nullopt;
}

std::optional<Format> format_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash)) {
    return std::nullopt;
  }
  std::string ext(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "lisp" || ext == "sexp" || ext == "scm") return Format::Sexpr;
  return parse_format(ext);
}

namespace {

Value encode(const SNode& node) {
  if (node.is_list()) {
    Value arr = Value::array();
    for (const auto& c : node.children) arr.items().push_back(encode(c));
    return arr;
  }
  if (node.is_symbol() && json::is_integer_literal(node.text)) return Value::number(node.text);
  return Value::string(sexpr::spell_atom(node));
}

Value encode_forms(const std::vector<SNode>& forms) {
  Value arr = Value::array();
  for (const auto& f : forms) arr.items().push_back(encode(f));
  return arr;
}

void add_opt(Value& obj, const char* key, const std::optional<std::string>& v) {
  if (v) obj.add(key, Value::string(*v));
}

void add_forms(Value& obj, const char* key, const std::vector<SNode>& forms) {
  if (!forms.empty()) obj.add(key, encode_forms(forms));
}

Value encode_symbol(const SymbolDecl& s) {
  Value obj = Value::object();
  obj.add("kind", Value::string(std::string(intent::kind_name(s.kind))));
  obj.add("name", Value::string(s.name));
  add_opt(obj, "sig", s.sig);
  add_forms(obj, "extra", s.extra);
  return obj;
}

Value encode_component(const Component& c) {
  Value obj = Value::object();
  obj.add("name", Value::string(c.name));
  add_opt(obj, "role", c.role);
  add_opt(obj, "invariants", c.invariants_text);
  add_opt(obj, "data_flow", c.data_flow);
  Value syms = Value::array();
  for (const auto& s : c.symbols) syms.items().push_back(encode_symbol(s));
  obj.add("symbols", std::move(syms));
  add_forms(obj, "symbols_extra", c.symbols_extra);
  add_forms(obj, "extra", c.extra);
  return obj;
}

Value encode_pillar(const Pillar& p) {
  Value obj = Value::object();
  obj.add("name", Value::string(p.name));
  add_opt(obj, "purpose", p.purpose);
  Value comps = Value::array();
  for (const auto& c : p.components) comps.items().push_back(encode_component(c));
  obj.add("components", std::move(comps));
  add_forms(obj, "extra", p.extra);
  return obj;
}

// Maps a JSON value back onto the schema. Strict mode stops at the first
// mismatch; lenient mode drops whatever does not fit.
class SchemaReader {
 public:
  explicit SchemaReader(bool strict) : strict_(strict) {}

  struct Mismatch {
    std::string message;
  };

  IntentDoc document(const Value& v) {
    IntentDoc doc;
    if (!v.is_object()) {
      bad("$", "expected an object");
      return doc;
    }
    check_keys(v, "$", {"intent", "design_constraints", "pillars", "extra"});
    if (auto name = name_field(v, "intent", "$")) doc.project = *name;
    if (const Value* cs = array_field(v, "design_constraints", "$")) {
      for (std::size_t i = 0; i < cs->items().size(); ++i) {
        const std::string where = fmt::format("$.design_constraints[{}]", i);
        auto body = form(cs->items()[i], where);
        if (!body) continue;
        if (!body->is_list() || body->children.empty() || !body->children[0].is_symbol()) {
          bad(where, "a constraint must be a list headed by a symbol");
          continue;
        }
        doc.constraints.push_back(Constraint{body->children[0].text, *body, {}});
      }
    }
    if (const Value* ps = array_field(v, "pillars", "$")) {
      for (std::size_t i = 0; i < ps->items().size(); ++i) {
        if (auto p = pillar(ps->items()[i], fmt::format("$.pillars[{}]", i))) {
          doc.pillars.push_back(std::move(*p));
        }
      }
    }
    doc.extra = forms_field(v, "extra", "$");
    return doc;
  }

 private:
  void bad(const std::string& where, const std::string& message) {
    if (strict_) throw Mismatch{fmt::format("{}: {}", where, message)};
  }

  void check_keys(const Value& obj, const std::string& where,
                  std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, _] : obj.members()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        bad(where, fmt::format("unknown key \"{}\"", k));
      }
    }
  }

  std::optional<std::string> string_field(const Value& obj, const char* key,
                                          const std::string& where) {
    const Value* v = obj.find(key);
    if (v == nullptr || v->is_null()) return std::nullopt;
    if (!v->is_string()) {
      bad(where, fmt::format("\"{}\" must be a string", key));
      return std::nullopt;
    }
    return v->text();
  }

  std::optional<std::string> name_field(const Value& obj, const char* key,
                                        const std::string& where) {
    const Value* v = obj.find(key);
    if (v == nullptr) {
      bad(where, fmt::format("missing \"{}\"", key));
      return std::nullopt;
    }
    if (!v->is_string() || !sexpr::is_valid_symbol(v->text())) {
      bad(where, fmt::format("\"{}\" must be a symbol name", key));
      return std::nullopt;
    }
    return v->text();
  }

  const Value* array_field(const Value& obj, const char* key, const std::string& where) {
    const Value* v = obj.find(key);
    if (v == nullptr || v->is_null()) return nullptr;
    if (!v->is_array()) {
      bad(where, fmt::format("\"{}\" must be an array", key));
      return nullptr;
    }
    return v;
  }

  std::optional<SNode> form(const Value& v, const std::string& where) {
    switch (v.kind()) {
      case json::Kind::Null:
        return SNode::list();
      case json::Kind::Number:
        return SNode::symbol(v.text());
      case json::Kind::String: {
        const std::string& t = v.text();
        if (!t.empty() && t.front() == '"') {
          auto lexed = sexpr::lex(t);
          if (lexed.diagnostics.empty() && lexed.tokens.size() == 1 &&
              lexed.tokens[0].kind == sexpr::TokenKind::String && lexed.tokens[0].span.end == t.size()) {
            return SNode::string(lexed.tokens[0].text);
          }
          bad(where, "malformed string atom");
          return std::nullopt;
        }
        if (!sexpr::is_valid_symbol(t)) {
          bad(where, fmt::format("\"{}\" is not a valid symbol", t));
          return std::nullopt;
        }
        return SNode::symbol(t);
      }
      case json::Kind::Array: {
        SNode list = SNode::list();
        for (std::size_t i = 0; i < v.items().size(); ++i) {
          if (auto c = form(v.items()[i], fmt::format("{}[{}]", where, i))) {
            list.children.push_back(std::move(*c));
          }
        }
        return list;
      }
      default:
        bad(where, "expected an atom or an array");
        return std::nullopt;
    }
  }

  std::vector<SNode> forms_field(const Value& obj, const char* key, const std::string& where) {
    std::vector<SNode> out;
    if (const Value* arr = array_field(obj, key, where)) {
      for (std::size_t i = 0; i < arr->items().size(); ++i) {
        if (auto f = form(arr->items()[i], fmt::format("{}.{}[{}]", where, key, i))) {
          out.push_back(std::move(*f));
        }
      }
    }
    return out;
  }

  std::optional<SymbolDecl> symbol(const Value& v, const std::string& where) {
    if (!v.is_object()) {
      bad(where, "expected an object");
      return std::nullopt;
    }
    check_keys(v, where, {"kind", "name", "sig", "extra"});
    SymbolDecl s;
    const Value* kind = v.find("kind");
    std::optional<intent::SymbolKind> k;
    if (kind != nullptr && kind->is_string()) k = intent::parse_kind(kind->text());
    if (!k) {
      bad(where, "\"kind\" must be function, type or constant");
      return std::nullopt;
    }
    s.kind = *k;
    auto name = name_field(v, "name", where);
    if (!name) return std::nullopt;
    s.name = *name;
    s.sig = string_field(v, "sig", where);
    s.extra = forms_field(v, "extra", where);
    return s;
  }

  std::optional<Component> component(const Value& v, const std::string& where) {
    if (!v.is_object()) {
      bad(where, "expected an object");
      return std::nullopt;
    }
    check_keys(v, where,
               {"name", "role", "invariants", "data_flow", "symbols", "symbols_extra", "extra"});
    Component c;
    auto name = name_field(v, "name", where);
    if (!name) return std::nullopt;
    c.name = *name;
    c.role = string_field(v, "role", where);
    c.invariants_text = string_field(v, "invariants", where);
    c.data_flow = string_field(v, "data_flow", where);
    if (const Value* syms = array_field(v, "symbols", where)) {
      for (std::size_t i = 0; i < syms->items().size(); ++i) {
        if (auto s = symbol(syms->items()[i], fmt::format("{}.symbols[{}]", where, i))) {
          c.symbols.push_back(std::move(*s));
        }
      }
    }
    c.symbols_extra = forms_field(v, "symbols_extra", where);
    c.extra = forms_field(v, "extra", where);
    return c;
  }

  std::optional<Pillar> pillar(const Value& v, const std::string& where) {
    if (!v.is_object()) {
      bad(where, "expected an object");
      return std::nullopt;
    }
    check_keys(v, where, {"name", "purpose", "components", "extra"});
    Pillar p;
    auto name = name_field(v, "name", where);
    if (!name) return std::nullopt;
    p.name = *name;
    p.purpose = string_field(v, "purpose", where);
    if (const Value* comps = array_field(v, "components", where)) {
      for (std::size_t i = 0; i < comps->items().size(); ++i) {
        if (auto c = component(comps->items()[i], fmt::format("{}.components[{}]", where, i))) {
          p.components.push_back(std::move(*c));
        }
      }
    }
    p.extra = forms_field(v, "extra", where);
    return p;
  }

  bool strict_;
};

}  // namespace

Value to_json_value(const IntentDoc& doc) {
  Value obj = Value::object();
  obj.add("intent", Value::string(doc.project));
  Value cs = Value::array();
  for (const auto& c : doc.constraints) cs.items().push_back(encode(c.body));
  obj.add("design_constraints", std::move(cs));
  Value ps = Value::array();
  for (const auto& p : doc.pillars) ps.items().push_back(encode_pillar(p));
  obj.add("pillars", std::move(ps));
  add_forms(obj, "extra", doc.extra);
  return obj;
}

std::string to_json(const IntentDoc& doc) { return json::print(to_json_value(doc)); }

ConvertResult from_json(std::string_view text) {
  ConvertResult out;
  auto parsed = json::parse(text);
  if (!parsed.value) {
    out.diagnostics = std::move(parsed.diagnostics);
    return out;
  }
  try {
    out.doc = SchemaReader(true).document(*parsed.value);
  } catch (const SchemaReader::Mismatch& m) {
    SourceSpan whole;
    whole.start_line = whole.end_line = 1;
    whole.start_col = whole.end_col = 1;
    out.diagnostics.push_back(make_error(DiagCode::JsonSchema, whole, m.message));
  }
  return out;
}

std::string to_yaml(const IntentDoc& doc) { return yaml::print(to_json_value(doc)); }

ConvertResult from_yaml(std::string_view text) {
  ConvertResult out;
  auto parsed = yaml::parse(text);
  out.diagnostics = std::move(parsed.diagnostics);
  if (!parsed.root || has_errors(out.diagnostics)) return out;
  out.doc = SchemaReader(false).document(yaml::to_json(*parsed.root));
  return out;
}

std::string to_format(const IntentDoc& doc, Format format) {
  switch (format) {
    case Format::Sexpr: return intent::print(doc);
    case Format::Json: return to_json(doc);
    case Format::Yaml: return to_yaml(doc);
    case Format::Markdown: return to_markdown(doc);
  }
  return {};
}

ConvertResult from_format(std::string_view text, Format format, sexpr::ParseMode mode) {
  switch (format) {
    case Format::Json: return from_json(text);
    case Format::Yaml: return from_yaml(text);
    case Format::Markdown: return from_markdown(text);
    case Format::Sexpr: break;
  }
  ConvertResult out;
  auto parsed = sexpr::parse(text, mode);
  out.diagnostics = parsed.diagnostics;
  if (mode == sexpr::ParseMode::Strict && !parsed.ok()) return out;
  auto built = intent::build(std::span<const SNode>(parsed.roots));
  out.diagnostics.insert(out.diagnostics.end(), built.diagnostics.begin(), built.diagnostics.end());
  out.doc = std::move(built.doc);
  return out;
}

}  // namespace forge::bridge
