#include "forge/navigator.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace forge::nav {

namespace {
constexpr std::string_view kConstraintScope = "design-constraints";
}

std::optional<NavPath> NavPath::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto slash = text.find('/', pos);
    parts.emplace_back(text.substr(pos, slash == std::string_view::npos ? text.npos : slash - pos));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  if (parts.size() > 3 || std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); })) {
    return std::nullopt;
  }
  NavPath p;
  if (parts[0] == kConstraintScope) {
    if (parts.size() != 2) return std::nullopt;
    p.pillar = parts[0];
    p.constraint = parts[1];
    return p;
  }
  p.pillar = parts[0];
  if (parts.size() > 1) p.component = parts[1];
  if (parts.size() > 2) p.symbol = parts[2];
  return p;
}

std::string NavPath::render() const {
  if (constraint) return std::string(kConstraintScope) + "/" + *constraint;
  std::string s = pillar;
  if (component) s += "/" + *component;
  if (component && symbol) s += "/" + *symbol;
  return s;
}

std::string_view hit_kind_name(HitKind kind) {
  switch (kind) {
    case HitKind::Pillar: return "pillar";
    case HitKind::Component: return "component";
    case HitKind::Function: return "function";
    case HitKind::Type: return "type";
    case HitKind::Constant: return "constant";
    case HitKind::Constraint: return "constraint";
  }
  return "pillar";
}

namespace {

HitKind symbol_hit_kind(intent::SymbolKind k) {
  switch (k) {
    case intent::SymbolKind::Function: return HitKind::Function;
    case intent::SymbolKind::Type: return HitKind::Type;
    case intent::SymbolKind::Constant: return HitKind::Constant;
  }
  return HitKind::Function;
}

const SNode* named_child(const SNode& parent, std::string_view head, std::string_view name) {
  for (const auto& c : parent.children) {
    if (c.head() == head && c.children.size() >= 2 && c.children[1].is_symbol() && c.children[1].text == name) {
      return &c;
    }
  }
  return nullptr;
}

const SNode* symbol_form(const SNode& component, std::string_view name) {
  for (const auto& block : component.children) {
    if (block.head() != "symbols") continue;
    for (const auto& c : block.children) {
      if (intent::parse_kind(c.head()) && c.children.size() >= 2 && c.children[1].is_symbol() &&
          c.children[1].text == name) {
        return &c;
      }
    }
  }
  return nullptr;
}

std::string snippet(const IntentDoc& doc, const NavPath& path) {
  return sexpr::print_canonical(subtree(doc, path));
}

// Stable sort by descending score keeps document order among equals.
void rank(std::vector<QueryHit>& hits) {
  std::stable_sort(hits.begin(), hits.end(), [](const QueryHit& a, const QueryHit& b) { return a.score > b.score; });
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-' ||
         (static_cast<unsigned char>(c) & 0x80) != 0;
}

bool contains_word(std::string_view haystack, std::string_view needle) {
  const std::string h = lower(haystack);
  const std::string n = lower(needle);
  for (std::size_t pos = h.find(n); pos != std::string::npos; pos = h.find(n, pos + 1)) {
    const bool left = pos == 0 || !word_char(h[pos - 1]);
    const bool right = pos + n.size() == h.size() || !word_char(h[pos + n.size()]);
    if (left && right) return true;
  }
  return false;
}

}  // namespace

std::vector<QueryHit> find_symbol(const IntentDoc& doc, std::string_view pattern, MatchMode mode) {
  std::vector<QueryHit> hits;
  if (pattern.empty()) return hits;
  const std::string pat(pattern);
  auto score = [&](const std::string& name) -> double {
    switch (mode) {
      case MatchMode::Exact: return name == pattern ? 1.0 : 0.0;
      case MatchMode::Glob: return fnmatch(pat.c_str(), name.c_str(), 0) == 0 ? 1.0 : 0.0;
      case MatchMode::Substring:
        return name.find(pattern) != std::string::npos
                   ? static_cast<double>(pattern.size()) / static_cast<double>(name.size())
                   : 0.0;
    }
    return 0.0;
  };
  auto consider = [&](const std::string& name, NavPath path, HitKind kind) {
    if (const double s = score(name); s > 0.0) {
      hits.push_back({path, kind, snippet(doc, path), s});
    }
  };
  for (const auto& p : doc.pillars) {
    consider(p.name, NavPath{p.name, {}, {}, {}}, HitKind::Pillar);
    for (const auto& c : p.components) {
      consider(c.name, NavPath{p.name, c.name, {}, {}}, HitKind::Component);
      for (const auto& s : c.symbols) {
        consider(s.name, NavPath{p.name, c.name, s.name, {}}, symbol_hit_kind(s.kind));
      }
    }
  }
  rank(hits);
  return hits;
}

std::vector<QueryHit> who_owns(const IntentDoc& doc, std::string_view topic) {
  std::vector<QueryHit> hits;
  if (topic.empty()) return hits;
  for (const auto& c : doc.constraints) {
    double s = 0.0;
    if (lower(c.name) == lower(topic)) {
      s = 1.0;
    } else if (contains_word(sexpr::print_canonical(c.body), topic)) {
      s = 0.75;
    }
    if (s > 0.0) {
      NavPath path{std::string(kConstraintScope), {}, {}, c.name};
      hits.push_back({path, HitKind::Constraint, sexpr::print_canonical(c.body), s});
    }
  }
  for (const auto& p : doc.pillars) {
    for (const auto& c : p.components) {
      const bool in_role = c.role && contains_word(*c.role, topic);
      const bool in_inv = c.invariants_text && contains_word(*c.invariants_text, topic);
      if (in_role || in_inv) {
        NavPath path{p.name, c.name, {}, {}};
        hits.push_back({path, HitKind::Component, snippet(doc, path), 0.5});
      }
    }
  }
  rank(hits);
  return hits;
}

SNode subtree(const IntentDoc& doc, const NavPath& path) {
  const SNode root = doc.source ? *doc.source : intent::to_sexpr(doc);
  auto missing = [&](const std::string& prefix) {
    return ForgeError(DiagCode::PathNotFound,
                      prefix.empty() ? fmt::format("'{}' not found", path.render())
                                     : fmt::format("'{}' not found below '{}'", path.render(), prefix));
  };
  if (path.constraint) {
    for (const auto& block : root.children) {
      if (block.head() != kConstraintScope) continue;
      for (const auto& c : block.children) {
        if (c.head() == *path.constraint) return c;
      }
      throw missing(std::string(kConstraintScope));
    }
    throw missing("");
  }
  const SNode* pillar = named_child(root, "pillar", path.pillar);
  if (pillar == nullptr) throw missing("");
  if (!path.component) return *pillar;
  const SNode* component = named_child(*pillar, "component", *path.component);
  if (component == nullptr) throw missing(path.pillar);
  if (!path.symbol) return *component;
  const SNode* symbol = symbol_form(*component, *path.symbol);
  if (symbol == nullptr) throw missing(path.pillar + "/" + *path.component);
  return *symbol;
}

std::size_t component_weight(const IntentDoc& doc, const NavPath& path) {
  for (const auto& p : doc.pillars) {
    if (p.name != path.pillar) continue;
    for (const auto& c : p.components) {
      if (path.component && c.name == *path.component) return c.symbols.size() + 1;
    }
  }
  return 0;
}

std::vector<std::vector<NavPath>> partition(const IntentDoc& doc, std::size_t k) {
  struct Item {
    NavPath path;
    std::size_t weight;
    std::size_t order;
  };
  std::vector<Item> items;
  for (const auto& p : doc.pillars) {
    for (const auto& c : p.components) {
      items.push_back({NavPath{p.name, c.name, {}, {}}, c.symbols.size() + 1, items.size()});
    }
  }
  if (k == 0) return {};
  std::vector<Item> sorted = items;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Item& a, const Item& b) { return a.weight > b.weight; });
  std::vector<std::vector<Item>> buckets(k);
  std::vector<std::size_t> load(k, 0);
  for (auto& item : sorted) {
    const std::size_t b = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
    load[b] += item.weight;
    buckets[b].push_back(item);
  }
  std::vector<std::vector<NavPath>> out(k);
  for (std::size_t b = 0; b < k; ++b) {
    std::sort(buckets[b].begin(), buckets[b].end(), [](const Item& x, const Item& y) { return x.order < y.order; });
    for (auto& item : buckets[b]) out[b].push_back(std::move(item.path));
  }
  return out;
}

std::string format_hits(const std::vector<QueryHit>& hits) {
  std::string out;
  for (const auto& h : hits) {
    const std::string first = h.snippet.substr(0, h.snippet.find('\n'));
    out += fmt::format("{:.3f}\t{}\t{}\t{}\n", h.score, hit_kind_name(h.kind), h.path.render(), first);
  }
  return out;
}

std::string format_partition(const IntentDoc& doc, const std::vector<std::vector<NavPath>>& buckets) {
  std::string out;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    std::size_t weight = 0;
    std::string paths;
    for (const auto& p : buckets[b]) {
      weight += component_weight(doc, p);
      if (!paths.empty()) paths += ' ';
      paths += p.render();
    }
    out += fmt::format("{}\t{}\t{}\n", b, weight, paths.empty() ? "-" : paths);
  }
  return out;
}

}  // namespace forge::nav
