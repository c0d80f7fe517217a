#include "forge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace forge::corpus {

using intent::Component;
using intent::Constraint;
using intent::IntentDoc;
using intent::Pillar;
using intent::SymbolDecl;
using intent::SymbolKind;
using sexpr::SNode;

std::string_view jarvis_listing() {
  static constexpr std::string_view text =
      "(intent jarvis\n"
      "  (design-constraints\n"
      "    (three-pillars (memory control tools))\n"
      "    (communication (must-use EventBus))\n"
      "    (db-access (only memory/storage)))\n"
      "  (pillar memory\n"
      "    (purpose \"Data capture, storage, analysis\")\n"
      "    (component storage\n"
      "      (role \"SOLE DB gateway\")\n"
      "      (invariants \"No raw SQL outside this module\")\n"
      "      (data-flow \"Event -> Storage -> PostgreSQL\")\n"
      "      (symbols\n"
      "        (function save_message\n"
      "          (sig \"async fn save_message(&self, ...)\"))))))\n";
  return text;
}

namespace {

// Draws are made with explicit rejection sampling so that sequences do not
// depend on the standard library's distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % n);
  }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::size_t percent) { return below(100) < percent; }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::string_view kPillars[] = {"memory", "control", "tools",   "io",      "net",    "ui",
                                         "core",   "render",  "storage", "billing", "search", "auth"};
constexpr std::string_view kComponents[] = {"storage", "loop",    "router",  "cache",   "scheduler", "parser",
                                            "index",   "gateway", "session", "ledger",  "planner",   "codec",
                                            "watcher", "client",  "queue",   "archive", "registry",  "monitor"};
constexpr std::string_view kVerbs[] = {"save", "load", "fetch", "parse",  "render", "emit",  "flush",
                                       "open", "close", "route", "verify", "merge",  "index", "publish"};
constexpr std::string_view kNouns[] = {"message", "event",  "record", "frame", "batch",  "token",  "session",
                                       "config",  "schema", "buffer", "query", "result", "snapshot", "handle"};
constexpr std::string_view kTypes[] = {"Message", "Event",  "Record", "Frame",    "Batch",  "Token",
                                       "Session", "Config", "Query",  "Snapshot", "Handle", "Plan"};
constexpr std::string_view kPurposes[] = {
    "Data capture, storage, analysis", "Decision loop and task scheduling", "External tool adapters",
    "Network transport and retries",   "User-facing views and input",       "Shared primitives",
    "Search indexing and ranking",     "Identity, tokens and permissions"};
constexpr std::string_view kRoles[] = {
    "SOLE DB gateway",         "Owns the retry policy for outbound calls", "Single writer of the event log",
    "Parses and validates input frames", "Caches hot query results",   "Schedules background jobs",
    "Translates tool calls into requests", "Holds session state between turns"};
constexpr std::string_view kInvariants[] = {
    "No raw SQL outside this module", "Never blocks the event loop", "All writes go through the queue",
    "Idempotent on retry",            "No direct network access",    "Read-only after startup"};
constexpr std::string_view kFlows[] = {"Event -> Storage -> PostgreSQL", "Request -> Router -> Handler",
                                       "Frame -> Parser -> Index",      "Job -> Scheduler -> Worker",
                                       "Query -> Cache -> Store"};
constexpr std::string_view kOwners[] = {"alice", "bob", "carol", "dmitri", "erin"};

template <typename T, std::size_t N>
std::span<const T> all(const T (&a)[N]) {
  return std::span<const T>(a, N);
}

std::string snake(Rng& rng) {
  return fmt::format("{}_{}", rng.pick(all(kVerbs)), rng.pick(all(kNouns)));
}

std::string function_sig(Rng& rng, const std::string& name) {
  const std::string type(rng.pick(all(kTypes)));
  const std::string arg(rng.pick(all(kNouns)));
  switch (rng.below(4)) {
    case 0: return fmt::format("async fn {}(&self, {}: &{}) -> Result<(), Error>", name, arg, type);
    case 1: return fmt::format("fn {}(&mut self, id: u64) -> Option<{}>", name, type);
    case 2: return fmt::format("def {}(self, {}: {}) -> bool", name, arg, type);
    default: return fmt::format("func (s *{}) {}(ctx context.Context) error", type, name);
  }
}

std::string type_sig(Rng& rng, const std::string& name) {
  switch (rng.below(3)) {
    case 0: return fmt::format("pub struct {} {{ id: u64, body: String }}", name);
    case 1: return fmt::format("enum {} {{ Pending, Done, Failed }}", name);
    default: return fmt::format("class {}(BaseModel)", name);
  }
}

SNode sym(std::string_view s) { return SNode::symbol(std::string(s)); }
SNode str(std::string_view s) { return SNode::string(std::string(s)); }

SNode random_extra(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return SNode::list({sym("owner"), str(rng.pick(all(kOwners)))});
    case 1: return SNode::list({sym("since"), sym(std::to_string(2019 + rng.below(7)))});
    case 2: return SNode::list({sym("stability"), sym(rng.chance(50) ? "stable" : "experimental")});
    case 3: return SNode::list({sym("tags"), SNode::list({sym(rng.pick(all(kNouns))), sym("hot-path")})});
    default: return SNode::list({sym("file"), str(fmt::format("src/{}.rs", rng.pick(all(kNouns))))});
  }
}

template <typename T, std::size_t N>
std::vector<std::string> distinct(Rng& rng, const T (&pool)[N], std::size_t count) {
  std::vector<std::string> names(std::begin(pool), std::end(pool));
  for (std::size_t i = names.size(); i > 1; --i) std::swap(names[i - 1], names[rng.below(i)]);
  names.resize(std::min(count, names.size()));
  return names;
}

IntentDoc generate(Rng& rng, const DocOptions& options) {
  IntentDoc doc;
  doc.project = fmt::format("{}-{}", rng.pick(all(kPillars)), rng.pick(all(kComponents)));

  const auto pillar_names = distinct(rng, kPillars, rng.between(1, 3));
  for (const auto& pname : pillar_names) {
    Pillar p;
    p.name = pname;
    if (rng.chance(85)) p.purpose = std::string(rng.pick(all(kPurposes)));
    for (const auto& cname : distinct(rng, kComponents, rng.between(1, 3))) {
      Component c;
      c.name = cname;
      if (rng.chance(85)) c.role = std::string(rng.pick(all(kRoles)));
      if (rng.chance(50)) c.invariants_text = std::string(rng.pick(all(kInvariants)));
      if (rng.chance(40)) c.data_flow = std::string(rng.pick(all(kFlows)));
      std::set<std::string> used;
      const std::size_t n = rng.between(1, 4);
      for (std::size_t i = 0; i < n; ++i) {
        SymbolDecl d;
        const std::size_t k = rng.below(10);
        d.kind = k < 7 ? SymbolKind::Function : (k < 9 ? SymbolKind::Type : SymbolKind::Constant);
        if (d.kind == SymbolKind::Function) {
          d.name = snake(rng);
          d.sig = function_sig(rng, d.name);
        } else if (d.kind == SymbolKind::Type) {
          d.name = std::string(rng.pick(all(kTypes))) + std::string(rng.pick(all(kTypes)));
          d.sig = type_sig(rng, d.name);
        } else {
          d.name = fmt::format("MAX_{}", rng.pick(all(kNouns)));
          std::transform(d.name.begin(), d.name.end(), d.name.begin(),
                         [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
          if (rng.chance(50)) d.sig = fmt::format("const {}: usize = {}", d.name, 16 << rng.below(6));
        }
        if (!used.insert(d.name).second) continue;
        if (options.extras && rng.chance(10)) d.extra.push_back(random_extra(rng));
        c.symbols.push_back(std::move(d));
      }
      if (options.extras && rng.chance(15)) c.extra.push_back(random_extra(rng));
      if (options.extras && rng.chance(5)) c.symbols_extra.push_back(SNode::list({sym("note"), str("generated")}));
      p.components.push_back(std::move(c));
    }
    if (options.extras && rng.chance(10)) p.extra.push_back(random_extra(rng));
    doc.pillars.push_back(std::move(p));
  }

  auto constraint = [&](SNode body) {
    std::string name(body.head());
    doc.constraints.push_back(Constraint{std::move(name), std::move(body), {}});
  };
  if (rng.chance(70)) {
    SNode names = SNode::list();
    for (const auto& p : doc.pillars) names.children.push_back(sym(p.name));
    constraint(SNode::list({sym("three-pillars"), std::move(names)}));
  }
  if (rng.chance(60)) constraint(SNode::list({sym("communication"), SNode::list({sym("must-use"), sym("EventBus")})}));
  if (rng.chance(50)) {
    const auto& p = doc.pillars.front();
    constraint(SNode::list({sym("db-access"),
                            SNode::list({sym("only"), sym(p.name + "/" + p.components.front().name)})}));
  }
  if (rng.chance(30)) {
    constraint(SNode::list({sym("max-latency-ms"), sym(std::to_string(50 * rng.between(1, 8)))}));
  }
  if (options.extras && rng.chance(10)) doc.extra.push_back(random_extra(rng));
  return doc;
}

}  // namespace

IntentDoc random_doc(std::uint64_t seed, const DocOptions& options) {
  Rng rng(seed);
  while (true) {
    IntentDoc doc = generate(rng, options);
    const SNode tree = intent::to_sexpr(doc);
    if (sexpr::count_leaves(std::span<const SNode>(&tree, 1)) >= options.min_leaves) return doc;
  }
}

coevo::SymbolInventory random_inventory(std::uint64_t seed) {
  Rng rng(seed);
  coevo::SymbolInventory inv;
  inv.root = "project";
  constexpr std::string_view exts[] = {".rs", ".py", ".go", ".ts"};
  std::vector<std::string> files;
  const std::size_t nfiles = rng.between(1, 8);
  for (std::size_t i = 0; i < nfiles; ++i) {
    const std::string stem(rng.pick(all(kComponents)));
    const std::string ext(rng.pick(all(exts)));
    switch (rng.below(4)) {
      case 0: files.push_back(stem + ext); break;
      case 1: files.push_back(fmt::format("{}/{}{}", rng.pick(all(kPillars)), stem, ext)); break;
      default:
        files.push_back(fmt::format("{}/{}/{}{}", rng.pick(all(kPillars)), rng.pick(all(kPillars)), stem, ext));
    }
  }
  const std::size_t n = rng.between(1, 30);
  for (std::size_t i = 0; i < n; ++i) {
    coevo::InventoryEntry e;
    const std::size_t k = rng.below(10);
    e.kind = k < 7 ? SymbolKind::Function : (k < 9 ? SymbolKind::Type : SymbolKind::Constant);
    e.name = e.kind == SymbolKind::Type ? std::string(rng.pick(all(kTypes))) : snake(rng);
    e.file = files[rng.below(files.size())];
    e.line = static_cast<int>(1 + rng.below(2000));
    if (rng.chance(80)) e.sig = e.kind == SymbolKind::Type ? type_sig(rng, e.name) : function_sig(rng, e.name);
    const bool dup = std::any_of(inv.entries.begin(), inv.entries.end(), [&](const coevo::InventoryEntry& o) {
      return o.kind == e.kind && o.name == e.name && o.file == e.file && o.line == e.line;
    });
    if (!dup) inv.entries.push_back(std::move(e));
  }
  return inv;
}

}  // namespace forge::corpus
