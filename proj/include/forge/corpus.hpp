#pragma once

// Reference descriptor and seeded generators for documents and inventories.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "forge/coevolution.hpp"
#include "forge/intent.hpp"

namespace forge::corpus {

/// The jarvis reference descriptor, byte for byte.
std::string_view jarvis_listing();

struct DocOptions {
  bool extras = true;           // add unknown attributes to some entities
  std::size_t min_leaves = 10;  // regenerate until the document has this many
};

/// A random descriptor that every format can express: names are plain
/// identifiers, strings hold no newlines, and extra forms nest at most two
/// levels deep. The same seed always gives the same document.
intent::IntentDoc random_doc(std::uint64_t seed, const DocOptions& options = {});

/// A random inventory with unique (kind, name, file, line) rows, realistic
/// paths (including files at the root) and mostly present sigs.
coevo::SymbolInventory random_inventory(std::uint64_t seed);

}  // namespace forge::corpus
