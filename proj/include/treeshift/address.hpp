#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace treeshift {

// Canonical vertex address.
//
// Rooted trees: a child-slot path descending from the root; the empty path is
// the root itself. Text form "root", "0", "0.1.1".
//
// Unrooted trees: `hops` parent steps up from the anchor vertex, then a
// child-slot descent. Under every ancestor of the anchor, slot 0 is reserved
// for the edge leading back toward the anchor, so a canonical descent taken
// after at least one hop never starts with slot 0 (that vertex is already
// reachable with fewer hops). Text form "^2", "^1.2.0"; "^0" (or "anchor")
// is the anchor, and plain "0.1" abbreviates "^0.0.1".
struct VertexAddress {
  std::uint32_t hops = 0;
  std::vector<std::uint32_t> path;

  bool operator==(const VertexAddress&) const = default;

  // Depth relative to the root / the anchor's generation (negative above it).
  int level() const { return static_cast<int>(path.size()) - static_cast<int>(hops); }

  std::string to_string(bool rooted) const;

  static VertexAddress root() { return {}; }
  static VertexAddress anchor() { return {}; }

  // Parses either text form; never consults a model (validation against a
  // concrete tree happens in TreeModel::resolve).
  static VertexAddress parse(const std::string& text);
};

// Strict weak order matching a depth-first left-to-right walk of the
// enumeration window from its top vertex. Equivalent to lexicographic order
// of full descent paths written from the top of any window containing both
// addresses, but computable without knowing the window.
struct AddressOrder {
  bool operator()(const VertexAddress& a, const VertexAddress& b) const;
};

struct AddressHash {
  std::size_t operator()(const VertexAddress& v) const;
};

}  // namespace treeshift
