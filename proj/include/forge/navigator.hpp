#pragma once

// Read-only queries over a descriptor.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/intent.hpp"
#include "forge/sexpr.hpp"

namespace forge::nav {

using intent::IntentDoc;
using sexpr::SNode;

/// `pillar`, `pillar/component`, `pillar/component/symbol`, or
/// `design-constraints/NAME` for a constraint.
struct NavPath {
  std::string pillar;
  std::optional<std::string> component;
  std::optional<std::string> symbol;
  std::optional<std::string> constraint;  // set only for constraint paths

  static std::optional<NavPath> parse(std::string_view text);
  std::string render() const;

  friend bool operator==(const NavPath&, const NavPath&) = default;
};

enum class HitKind { Pillar, Component, Function, Type, Constant, Constraint };
std::string_view hit_kind_name(HitKind kind);

struct QueryHit {
  NavPath path;
  HitKind kind = HitKind::Pillar;
  std::string snippet;  // canonical S-expression of the matched form
  double score = 0.0;
};

enum class MatchMode { Exact, Substring, Glob };

/// Matches pillar, component and symbol names. Exact and glob matches score
/// 1.0; a substring match scores |pattern| / |name|. Ordered by score, then
/// document order.
std::vector<QueryHit> find_symbol(const IntentDoc& doc, std::string_view pattern, MatchMode mode);

/// Case-insensitive whole-word search. A constraint named `topic` scores 1.0,
/// a constraint mentioning it 0.75, a component role or invariant 0.5.
std::vector<QueryHit> who_owns(const IntentDoc& doc, std::string_view topic);

/// The source form at `path` (from doc.source when present, otherwise from
/// to_sexpr). Throws ForgeError(PATH_NOT_FOUND) naming the deepest prefix that
/// resolved.
SNode subtree(const IntentDoc& doc, const NavPath& path);

/// Greedy largest-first assignment of components to k buckets by weight
/// (symbol count + 1). Each bucket lists its paths in document order.
std::vector<std::vector<NavPath>> partition(const IntentDoc& doc, std::size_t k);

/// Symbols + 1 of the component at `path`; 0 if there is none.
std::size_t component_weight(const IntentDoc& doc, const NavPath& path);

/// `score<TAB>kind<TAB>path<TAB>snippet-first-line`, one hit per line.
std::string format_hits(const std::vector<QueryHit>& hits);

/// `index<TAB>weight<TAB>path path ...` per bucket; an empty bucket shows `-`.
std::string format_partition(const IntentDoc& doc, const std::vector<std::vector<NavPath>>& buckets);

}  // namespace forge::nav
