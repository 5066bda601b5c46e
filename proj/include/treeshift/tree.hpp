#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treeshift/address.hpp"

namespace treeshift {

// Enumeration horizon of a model. `up` counts ancestor generations available
// above the root/anchor (always 0 for rooted models), `down` the descent
// depth below the root / below the anchor's generation.
struct DepthWindow {
  std::uint32_t up = 0;
  std::uint32_t down = 0;
};

enum class ShapeClass {
  Rooted,
  HasBranchVertex,
  BilateralLine,
  UnilateralLeafLine,
  OtherUnrooted,
};

enum class TreeFamily {
  KaryRooted,
  KaryUnrooted,
  BilateralLine,
  UnilateralLeafLine,
  GraftedFreeEnd,
};

struct ValidationIssue {
  std::string axiom;                 // no-circuits | indegree-at-most-one | connected | root
  std::vector<std::string> witness;  // offending vertices / edges, by input name
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
  std::string summary() const;
};

// Checks the directed-tree axioms on a raw edge list without building a
// model. Every violated axiom is reported with a witness.
ValidationReport validate_edges(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::optional<std::string>& stated_root);

struct FreeEndVerdict {
  enum class Kind { HasFreeEnd, NoFreeEnd, UnknownUpToDepth };
  Kind kind = Kind::UnknownUpToDepth;
  std::optional<VertexAddress> witness;  // vertex whose descendants are all unary
  std::uint32_t depth = 0;               // horizon inspected when Unknown
};

// Enumeration budget; reads TREESHIFT_WINDOW_LIMIT (default 100000).
std::uint64_t window_limit();

// A directed tree, either finite-explicit (named vertices, edge list) or one
// of the generator families restricted to a depth window. All vertex
// arguments must lie inside the window; operations whose answer depends on
// vertices beyond it throw WindowExhausted rather than truncate.
class TreeModel {
public:
  static TreeModel finite(const std::vector<std::pair<std::string, std::string>>& edges,
                          const std::optional<std::string>& stated_root = {});
  static TreeModel kary_rooted(std::uint32_t k, DepthWindow w, bool opaque = false);
  static TreeModel kary_unrooted(std::uint32_t k, DepthWindow w, bool opaque = false);
  static TreeModel bilateral_line(DepthWindow w, bool opaque = false);
  static TreeModel unilateral_leaf_line(DepthWindow w, bool opaque = false);
  static TreeModel grafted_free_end(std::uint32_t k, const VertexAddress& graft_at,
                                    DepthWindow w, bool opaque = false);

  // Same family with a different declared window (families only).
  TreeModel with_window(DepthWindow w) const;

  bool rooted() const { return rooted_; }
  bool is_finite() const { return finite_ != nullptr; }
  bool opaque() const { return opaque_; }
  const DepthWindow& window() const { return window_; }
  TreeFamily family() const;
  std::uint32_t branching() const { return k_; }  // k of the family (1 for lines)
  const VertexAddress& graft_at() const { return graft_at_; }

  bool leafless() const;
  std::optional<VertexAddress> leaf_witness() const;
  std::uint32_t max_outdegree() const;

  bool in_window(const VertexAddress& v) const;
  // Existence + canonical-form check against this model (window aside).
  bool validate_address(const VertexAddress& v, std::string* why = nullptr) const;

  // Accepts names (finite models) and address text; checks canonicity and the
  // window. InputError for nonexistent vertices, WindowExhausted for valid
  // vertices beyond the window.
  VertexAddress resolve(const std::string& text) const;
  std::string format(const VertexAddress& v) const;

  std::uint32_t outdegree(const VertexAddress& v) const;
  // nullopt exactly at a root; throws WindowExhausted at the window top.
  std::optional<VertexAddress> parent(const VertexAddress& v) const;
  std::optional<VertexAddress> parent_n(const VertexAddress& v, std::uint32_t n) const;
  // Throw WindowExhausted if any child lies beyond the window.
  std::vector<VertexAddress> children(const VertexAddress& v) const;
  // Children inside the window only; the in-tree count is outdegree(v).
  std::vector<VertexAddress> children_clipped(const VertexAddress& v) const;
  std::vector<VertexAddress> children_n(const VertexAddress& u, std::uint32_t n) const;
  // |child^n(u)| as a double (families use closed forms; exact while the
  // count is exactly representable).
  double gamma(const VertexAddress& u, std::uint32_t n) const;

  // All window vertices in canonical (depth-first) order; guarded by
  // window_limit().
  std::vector<VertexAddress> window_vertices() const;
  // Undirected ball of the given radius around the root/anchor, clipped to
  // the window, in canonical order.
  std::vector<VertexAddress> vertices_to_depth(std::uint32_t radius) const;

  ShapeClass classify_shape() const;
  std::optional<VertexAddress> branch_witness() const;

  // Free-end analysis; requires a leafless model. Opaque models yield
  // UnknownUpToDepth — no finite observation certifies either outcome.
  FreeEndVerdict free_end_verdict(std::uint32_t depth_bound) const;

  struct VertexSet {
    std::vector<VertexAddress> members;          // explicit list, or
    std::optional<VertexAddress> generation_of;  // everything at this vertex's level
  };
  std::uint32_t dist_to_set(const VertexAddress& v, const VertexSet& H) const;

  // True when every vertex weakly below u has the same outdegree; makes
  // depth-n aggregates collapse to closed forms.
  bool uniform_below(const VertexAddress& u) const;

private:
  struct FiniteData {
    std::vector<std::string> name;
    std::unordered_map<std::string, std::uint32_t> id_of;
    std::vector<std::int32_t> parent;
    std::vector<std::vector<std::uint32_t>> children;  // sorted by child name
    std::uint32_t root = 0;
    std::vector<VertexAddress> address_of;
    std::map<VertexAddress, std::uint32_t, AddressOrder> id_by_address;
    std::uint32_t max_depth = 0;
    std::optional<VertexAddress> leaf;
    std::optional<VertexAddress> branch;
    std::uint32_t max_outdeg = 0;
  };

  TreeModel() = default;
  std::uint32_t finite_id(const VertexAddress& v) const;
  std::uint32_t outdegree_raw(const VertexAddress& v) const;
  std::vector<VertexAddress> children_impl(const VertexAddress& v, bool clip) const;
  void check_member(const VertexAddress& v) const;
  void check_depth_reach(const VertexAddress& u, std::uint32_t n) const;

  bool rooted_ = true;
  bool opaque_ = false;
  DepthWindow window_{};
  TreeFamily family_ = TreeFamily::KaryRooted;
  std::uint32_t k_ = 0;
  VertexAddress graft_at_;
  std::shared_ptr<const FiniteData> finite_;
};

}  // namespace treeshift
