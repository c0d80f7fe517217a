#include "forge/coevolution.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace forge::coevo {

using intent::Component;
using intent::Pillar;
using intent::SymbolDecl;

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

SourceSpan line_span(int line, std::size_t begin, std::size_t length) {
  SourceSpan s;
  s.start_line = s.end_line = line;
  s.start_col = 1;
  s.end_col = static_cast<int>(length) + 1;
  s.begin = begin;
  s.end = begin + length;
  return s;
}

}  // namespace

bool is_valid_relative_path(std::string_view path) {
  if (path.empty() || path.front() == '/' || path.back() == '/') return false;
  if (path.find_first_of("\\ \t\r\n();\"") != std::string_view::npos) return false;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    if (slash == std::string_view::npos) slash = path.size();
    const auto seg = path.substr(pos, slash - pos);
    if (seg.empty() || seg == ".." || seg == ".") return false;
    pos = slash + 1;
  }
  return true;
}

InventoryResult read_inventory(std::string_view text, std::string root) {
  InventoryResult result;
  result.inventory.root = std::move(root);
  std::set<std::tuple<SymbolKind, std::string, std::string, int>> seen;
  std::size_t pos = 0;
  int number = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    const std::size_t begin = pos;
    pos = nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const SourceSpan span = line_span(number, begin, line.size());
    auto bad = [&](const std::string& why) {
      result.diagnostics.push_back(make_warning(DiagCode::BadRow, span, why));
    };

    const auto f = split_tabs(line);
    if (f.size() != 4 && f.size() != 5) {
      bad(fmt::format("expected 4 or 5 tab-separated fields, found {}", f.size()));
      continue;
    }
    const auto kind = intent::parse_kind(f[0]);
    if (!kind) {
      bad(fmt::format("unknown kind '{}'", f[0]));
      continue;
    }
    if (!sexpr::is_valid_symbol(f[1])) {
      bad(fmt::format("invalid symbol name '{}'", f[1]));
      continue;
    }
    if (!is_valid_relative_path(f[2])) {
      bad(fmt::format("invalid relative path '{}'", f[2]));
      continue;
    }
    int line_no = 0;
    const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), line_no);
    if (ec != std::errc() || ptr != f[3].data() + f[3].size() || line_no < 1) {
      bad(fmt::format("invalid line number '{}'", f[3]));
      continue;
    }
    InventoryEntry e{*kind, std::string(f[1]), std::string(f[2]), line_no, std::nullopt};
    if (f.size() == 5) e.sig = std::string(f[4]);
    if (!seen.emplace(e.kind, e.name, e.file, e.line).second) {
      result.diagnostics.push_back(make_warning(DiagCode::DupRow, span,
                                                fmt::format("duplicate entry for '{}' at {}:{}", e.name, e.file, e.line)));
      continue;
    }
    result.inventory.entries.push_back(std::move(e));
  }
  if (result.inventory.entries.empty()) {
    SourceSpan s;
    s.start_line = s.end_line = number + 1;
    s.start_col = s.end_col = 1;
    s.begin = s.end = text.size();
    result.diagnostics.push_back(make_error(DiagCode::EmptyInventory, s, "inventory has no valid rows"));
  }
  return result;
}

std::string write_inventory(const SymbolInventory& inventory) {
  std::string out;
  for (const auto& e : inventory.entries) {
    out += fmt::format("{}\t{}\t{}\t{}", intent::kind_name(e.kind), e.name, e.file, e.line);
    if (e.sig) out += "\t" + *e.sig;
    out += '\n';
  }
  return out;
}

IntentDoc skeleton(const SymbolInventory& inventory, DepthRule rule) {
  // pillar -> component -> symbols
  std::map<std::string, std::map<std::string, std::vector<const InventoryEntry*>>> tree;
  for (const auto& e : inventory.entries) {
    std::vector<std::string_view> segs;
    std::string_view path = e.file;
    for (auto slash = path.find('/'); slash != std::string_view::npos; slash = path.find('/')) {
      segs.push_back(path.substr(0, slash));
      path.remove_prefix(slash + 1);
    }
    std::string pillar = "root";
    if (!segs.empty()) {
      pillar = std::string(segs[0]);
      if (rule == DepthRule::TwoLevel && segs.size() >= 2) pillar += "." + std::string(segs[1]);
    }
    const auto dot = path.rfind('.');
    const std::string stem(dot == 0 || dot == std::string_view::npos ? path : path.substr(0, dot));
    tree[pillar][stem].push_back(&e);
  }

  IntentDoc doc;
  doc.project = sexpr::is_valid_symbol(inventory.root) ? inventory.root : "project";
  const auto body = sexpr::SNode::list({sexpr::SNode::symbol("generated-by"), sexpr::SNode::symbol("forge-skeleton")});
  doc.constraints.push_back(intent::Constraint{"generated-by", body, {}});
  for (auto& [pname, components] : tree) {
    Pillar p;
    p.name = pname;
    for (auto& [cname, entries] : components) {
      Component c;
      c.name = cname;
      std::stable_sort(entries.begin(), entries.end(), [](const InventoryEntry* a, const InventoryEntry* b) {
        return std::tie(a->name, a->kind, a->file, a->line) < std::tie(b->name, b->kind, b->file, b->line);
      });
      for (const InventoryEntry* e : entries) {
        SymbolDecl d;
        d.kind = e->kind;
        d.name = e->name;
        d.sig = e->sig;
        c.symbols.push_back(std::move(d));
      }
      p.components.push_back(std::move(c));
    }
    doc.pillars.push_back(std::move(p));
  }
  return doc;
}

std::string normalize_sig(std::string_view sig) {
  std::string out;
  bool space = false;
  for (char c : sig) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

DriftReport drift(const IntentDoc& doc, const SymbolInventory& inventory) {
  struct Declared {
    nav::NavPath path;
    const SymbolDecl* decl;
  };
  using Key = std::pair<SymbolKind, std::string>;
  std::map<Key, std::vector<Declared>> declared;
  for (const auto& p : doc.pillars) {
    for (const auto& c : p.components) {
      for (const auto& s : c.symbols) {
        declared[{s.kind, s.name}].push_back({nav::NavPath{p.name, c.name, s.name, {}}, &s});
      }
    }
  }
  std::map<Key, std::vector<const InventoryEntry*>> found;
  for (const auto& e : inventory.entries) found[{e.kind, e.name}].push_back(&e);

  DriftReport report;
  std::set<Key> keys;
  for (const auto& [k, _] : declared) keys.insert(k);
  for (const auto& [k, _] : found) keys.insert(k);
  for (const Key& key : keys) {
    auto& ds = declared[key];
    auto& es = found[key];
    std::vector<bool> d_used(ds.size(), false);
    std::vector<bool> e_used(es.size(), false);
    // Pair unused symbols that satisfy `fits`, first come first served.
    auto pair_up = [&](auto fits, auto on_pair) {
      for (std::size_t i = 0; i < ds.size(); ++i) {
        if (d_used[i]) continue;
        for (std::size_t j = 0; j < es.size(); ++j) {
          if (e_used[j] || !fits(ds[i].decl->sig, es[j]->sig)) continue;
          d_used[i] = e_used[j] = true;
          on_pair(i, j);
          break;
        }
      }
    };
    using Sig = std::optional<std::string>;
    auto none = [](std::size_t, std::size_t) {};
    pair_up([](const Sig& a, const Sig& b) { return a && b && normalize_sig(*a) == normalize_sig(*b); }, none);
    pair_up([](const Sig& a, const Sig& b) { return !a && !b; }, none);
    // Sigs on both sides that differ, before a sig-less entry can absorb one.
    pair_up([](const Sig& a, const Sig& b) { return a && b; },
            [&](std::size_t i, std::size_t j) { report.sig_mismatch.push_back({ds[i].path, *es[j], *ds[i].decl->sig}); });
    pair_up([](const Sig&, const Sig&) { return true; }, none);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (!d_used[i]) report.stale.push_back({ds[i].path, key.first, key.second});
    }
    for (std::size_t k = 0; k < es.size(); ++k) {
      if (!e_used[k]) report.uncovered.push_back(*es[k]);
    }
  }

  std::stable_sort(report.stale.begin(), report.stale.end(), [](const StaleSymbol& a, const StaleSymbol& b) {
    return std::make_pair(a.path.render(), a.name) < std::make_pair(b.path.render(), b.name);
  });
  std::stable_sort(report.uncovered.begin(), report.uncovered.end(),
                   [](const InventoryEntry& a, const InventoryEntry& b) {
                     return std::tie(a.file, a.name, a.line) < std::tie(b.file, b.name, b.line);
                   });
  std::stable_sort(report.sig_mismatch.begin(), report.sig_mismatch.end(),
                   [](const SigMismatch& a, const SigMismatch& b) { return a.path.render() < b.path.render(); });
  return report;
}

std::string format_drift_text(const DriftReport& r) {
  std::string out = fmt::format("STALE {}\n", r.stale.size());
  for (const auto& s : r.stale) out += fmt::format("  {} {}\n", intent::kind_name(s.kind), s.path.render());
  out += fmt::format("UNCOVERED {}\n", r.uncovered.size());
  for (const auto& e : r.uncovered) {
    out += fmt::format("  {} {} {}:{}\n", intent::kind_name(e.kind), e.name, e.file, e.line);
  }
  out += fmt::format("SIG-MISMATCH {}\n", r.sig_mismatch.size());
  for (const auto& m : r.sig_mismatch) {
    out += fmt::format("  {} {} ({}:{})\n    descriptor: {}\n    code:       {}\n", intent::kind_name(m.entry.kind),
                       m.path.render(), m.entry.file, m.entry.line, m.descriptor_sig, *m.entry.sig);
  }
  return out;
}

namespace {

std::string csv(std::string_view field) {
  if (field.find_first_of(",\"") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_drift_csv(const DriftReport& r) {
  std::string out = "category,kind,name,path_or_file\n";
  for (const auto& s : r.stale) {
    out += fmt::format("stale,{},{},{}\n", intent::kind_name(s.kind), csv(s.name), csv(s.path.render()));
  }
  for (const auto& e : r.uncovered) {
    out += fmt::format("uncovered,{},{},{}\n", intent::kind_name(e.kind), csv(e.name), csv(e.file));
  }
  for (const auto& m : r.sig_mismatch) {
    out += fmt::format("sig_mismatch,{},{},{}\n", intent::kind_name(m.entry.kind), csv(m.entry.name),
                       csv(m.path.render()));
  }
  return out;
}

}  // namespace forge::coevo
