#pragma once

// Symbol inventories, skeleton descriptors and drift between the two.
//
// Inventory format: one entry per line, fields separated by a single tab:
//   kind  name  file  line  [sig]
// `kind` is function, type or constant; `file` is a relative `/`-separated
// path; `line` is 1-based. Lines starting with `#` and blank lines are skipped.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/diagnostic.hpp"
#include "forge/intent.hpp"
#include "forge/navigator.hpp"

namespace forge::coevo {

using intent::IntentDoc;
using intent::SymbolKind;

struct InventoryEntry {
  SymbolKind kind = SymbolKind::Function;
  std::string name;
  std::string file;
  int line = 1;
  std::optional<std::string> sig;

  friend bool operator==(const InventoryEntry&, const InventoryEntry&) = default;
};

struct SymbolInventory {
  std::string root = "project";
  std::vector<InventoryEntry> entries;
};

struct InventoryResult {
  SymbolInventory inventory;
  std::vector<Diagnostic> diagnostics;
};

/// Bad rows (BAD_ROW) and repeated (kind, name, file, line) rows (DUP_ROW) are
/// skipped with a warning. No valid row at all is EMPTY_INVENTORY.
InventoryResult read_inventory(std::string_view text, std::string root = "project");

std::string write_inventory(const SymbolInventory& inventory);

bool is_valid_relative_path(std::string_view path);

enum class DepthRule { TopLevel, TwoLevel };

/// Pillar from the leading directory (two-level joins two segments with `.`;
/// `root` for files at the top). Component from the file stem. Everything is
/// sorted and a `(generated-by forge-skeleton)` constraint is added.
IntentDoc skeleton(const SymbolInventory& inventory, DepthRule rule = DepthRule::TopLevel);

/// Trims and collapses whitespace runs to one space.
std::string normalize_sig(std::string_view sig);

struct StaleSymbol {
  nav::NavPath path;
  SymbolKind kind;
  std::string name;
};

struct SigMismatch {
  nav::NavPath path;
  InventoryEntry entry;
  std::string descriptor_sig;
};

struct DriftReport {
  std::vector<StaleSymbol> stale;              // declared, not in the inventory
  std::vector<InventoryEntry> uncovered;       // in the inventory, not declared
  std::vector<SigMismatch> sig_mismatch;       // both sides have a differing sig

  bool drifted() const { return !stale.empty() || !sig_mismatch.empty(); }
  bool empty() const { return stale.empty() && uncovered.empty() && sig_mismatch.empty(); }
};

/// Matches by (kind, name). Within a name, pairs are taken in this order:
/// equal normalized sigs, no sig on either side, differing sigs (reported as
/// mismatches), then whatever is left. Unpaired symbols are stale or
/// uncovered.
DriftReport drift(const IntentDoc& doc, const SymbolInventory& inventory);

/// STALE, UNCOVERED and SIG-MISMATCH sections with counts.
std::string format_drift_text(const DriftReport& report);
/// `category,kind,name,path_or_file`.
std::string format_drift_csv(const DriftReport& report);

}  // namespace forge::coevo
