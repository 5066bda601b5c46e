#include "treeshift/tree.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <unordered_set>

#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"

namespace treeshift {

namespace {

bool is_prefix(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool is_strict_prefix(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

std::uint64_t window_limit() {
  const char* env = std::getenv("TREESHIFT_WINDOW_LIMIT");
  if (!env || !*env) return 100000;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0)
    throw InputError("TREESHIFT_WINDOW_LIMIT must be a positive integer");
  return v;
}

std::string ValidationReport::summary() const {
  if (issues.empty()) return "valid";
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.axiom + "(";
    for (std::size_t i = 0; i < issue.witness.size(); ++i) {
      if (i) out += ",";
      out += issue.witness[i];
    }
    out += ")";
  }
  return out;
}

ValidationReport validate_edges(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::optional<std::string>& stated_root) {
  ValidationReport rep;
  std::vector<std::string> name;
  std::unordered_map<std::string, std::uint32_t> id_of;
  auto intern = [&](const std::string& s) {
    if (s.empty()) throw InputError("empty vertex name");
    auto it = id_of.find(s);
    if (it != id_of.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(name.size());
    id_of.emplace(s, id);
    name.push_back(s);
    return id;
  };
  if (stated_root) intern(*stated_root);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  e.reserve(edges.size());
  for (const auto& [p, c] : edges) e.emplace_back(intern(p), intern(c));

  const std::uint32_t n = static_cast<std::uint32_t>(name.size());
  if (n == 0) {
    rep.issues.push_back({"root", {}});
    return rep;
  }

  std::vector<std::int64_t> parent(n, -1);
  for (const auto& [p, c] : e) {
    if (p == c) {
      rep.issues.push_back({"no-circuits", {name[p]}});
      continue;
    }
    if (parent[c] >= 0)
      rep.issues.push_back({"indegree-at-most-one",
                            {name[c], name[static_cast<std::uint32_t>(parent[c])], name[p]}});
    else
      parent[c] = p;
  }

  // Longer circuits: walk parent chains with three colors.
  std::vector<int> color(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (color[v] != 0) continue;
    std::vector<std::uint32_t> chain;
    std::uint32_t cur = v;
    while (true) {
      if (color[cur] == 1) {  // gray: found a circuit inside this chain
        std::vector<std::string> cycle;
        auto it = std::find(chain.begin(), chain.end(), cur);
        for (; it != chain.end(); ++it) cycle.push_back(name[*it]);
        rep.issues.push_back({"no-circuits", cycle});
        break;
      }
      if (color[cur] == 2) break;  // black: chain merges into settled ground
      color[cur] = 1;
      chain.push_back(cur);
      if (parent[cur] < 0 || static_cast<std::uint32_t>(parent[cur]) == cur) break;
      cur = static_cast<std::uint32_t>(parent[cur]);
    }
    for (std::uint32_t w : chain) color[w] = 2;
  }

  std::vector<std::uint32_t> roots;
  for (std::uint32_t v = 0; v < n; ++v)
    if (parent[v] < 0) roots.push_back(v);
  if (roots.size() != 1) {
    std::vector<std::string> w;
    for (std::uint32_t r : roots) w.push_back(name[r]);
    rep.issues.push_back({"root", w});
  }
  if (stated_root && roots.size() == 1 && name[roots[0]] != *stated_root)
    rep.issues.push_back({"root", {*stated_root, name[roots[0]]}});

  // Connectedness over the undirected support.
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [p, c] : e) {
    if (p == c) continue;
    adj[p].push_back(c);
    adj[c].push_back(p);
  }
  std::uint32_t start = roots.empty() ? 0 : roots[0];
  std::vector<char> seen(n, 0);
  std::deque<std::uint32_t> q{start};
  seen[start] = 1;
  while (!q.empty()) {
    std::uint32_t cur = q.front();
    q.pop_front();
    for (std::uint32_t w : adj[cur])
      if (!seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (!seen[v]) {
      rep.issues.push_back({"connected", {name[start], name[v]}});
      break;
    }
  return rep;
}

TreeModel TreeModel::finite(const std::vector<std::pair<std::string, std::string>>& edges,
                            const std::optional<std::string>& stated_root) {
  auto rep = validate_edges(edges, stated_root);
  if (!rep.valid()) throw InputError("invalid tree: " + rep.summary());

  auto data = std::make_shared<FiniteData>();
  auto intern = [&](const std::string& s) {
    auto it = data->id_of.find(s);
    if (it != data->id_of.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(data->name.size());
    data->id_of.emplace(s, id);
    data->name.push_back(s);
    return id;
  };
  if (stated_root) intern(*stated_root);
  for (const auto& [p, c] : edges) {
    std::uint32_t pi = intern(p), ci = intern(c);
    (void)pi;
    (void)ci;
  }
  const std::uint32_t n = static_cast<std::uint32_t>(data->name.size());
  data->parent.assign(n, -1);
  data->children.assign(n, {});
  for (const auto& [p, c] : edges) {
    std::uint32_t pi = data->id_of.at(p), ci = data->id_of.at(c);
    data->parent[ci] = static_cast<std::int32_t>(pi);
    data->children[pi].push_back(ci);
  }
  for (auto& ch : data->children)
    std::sort(ch.begin(), ch.end(),
              [&](std::uint32_t a, std::uint32_t b) { return data->name[a] < data->name[b]; });
  for (std::uint32_t v = 0; v < n; ++v)
    if (data->parent[v] < 0) data->root = v;

  data->address_of.assign(n, {});
  std::vector<std::uint32_t> stack{data->root};
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    const auto& addr = data->address_of[v];
    data->max_depth = std::max<std::uint32_t>(data->max_depth,
                                              static_cast<std::uint32_t>(addr.path.size()));
    data->max_outdeg = std::max<std::uint32_t>(
        data->max_outdeg, static_cast<std::uint32_t>(data->children[v].size()));
    for (std::uint32_t i = 0; i < data->children[v].size(); ++i) {
      std::uint32_t c = data->children[v][i];
      data->address_of[c] = addr;
      data->address_of[c].path.push_back(i);
      stack.push_back(c);
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) data->id_by_address.emplace(data->address_of[v], v);
  for (const auto& [addr, v] : data->id_by_address) {
    if (!data->leaf && data->children[v].empty()) data->leaf = addr;
    if (!data->branch && data->children[v].size() >= 2) data->branch = addr;
  }

  TreeModel m;
  m.rooted_ = true;
  m.window_ = DepthWindow{0, data->max_depth};
  m.finite_ = std::move(data);
  return m;
}

namespace {
void check_k(std::uint32_t k) {
  if (k < 1) throw InputError("family branching parameter k must be >= 1");
}
}  // namespace

TreeModel TreeModel::kary_rooted(std::uint32_t k, DepthWindow w, bool opaque) {
  check_k(k);
  TreeModel m;
  m.rooted_ = true;
  m.opaque_ = opaque;
  m.window_ = DepthWindow{0, w.down};
  m.family_ = TreeFamily::KaryRooted;
  m.k_ = k;
  return m;
}

TreeModel TreeModel::kary_unrooted(std::uint32_t k, DepthWindow w, bool opaque) {
  check_k(k);
  TreeModel m;
  m.rooted_ = false;
  m.opaque_ = opaque;
  m.window_ = w;
  m.family_ = TreeFamily::KaryUnrooted;
  m.k_ = k;
  return m;
}

TreeModel TreeModel::bilateral_line(DepthWindow w, bool opaque) {
  TreeModel m;
  m.rooted_ = false;
  m.opaque_ = opaque;
  m.window_ = w;
  m.family_ = TreeFamily::BilateralLine;
  m.k_ = 1;
  return m;
}

TreeModel TreeModel::unilateral_leaf_line(DepthWindow w, bool opaque) {
  TreeModel m;
  m.rooted_ = false;
  m.opaque_ = opaque;
  m.window_ = DepthWindow{w.up, w.down};
  m.family_ = TreeFamily::UnilateralLeafLine;
  m.k_ = 1;
  return m;
}

TreeModel TreeModel::grafted_free_end(std::uint32_t k, const VertexAddress& graft_at,
                                      DepthWindow w, bool opaque) {
  check_k(k);
  if (graft_at.hops != 0) throw InputError("graft vertex must be a rooted address");
  for (std::uint32_t s : graft_at.path)
    if (s >= k) throw InputError("graft address has a child slot out of range");
  if (graft_at.path.size() > w.down)
    throw InputError("graft vertex lies outside the depth window");
  TreeModel m;
  m.rooted_ = true;
  m.opaque_ = opaque;
  m.window_ = DepthWindow{0, w.down};
  m.family_ = TreeFamily::GraftedFreeEnd;
  m.k_ = k;
  m.graft_at_ = graft_at;
  return m;
}

TreeFamily TreeModel::family() const {
  if (finite_) throw DomainError("finite models belong to no generator family");
  return family_;
}

bool TreeModel::leafless() const {
  if (finite_) return !finite_->leaf.has_value();
  return family_ != TreeFamily::UnilateralLeafLine;
}

std::optional<VertexAddress> TreeModel::leaf_witness() const {
  if (finite_) return finite_->leaf;
  if (family_ == TreeFamily::UnilateralLeafLine) return VertexAddress::anchor();
  return std::nullopt;
}

std::uint32_t TreeModel::max_outdegree() const {
  if (finite_) return finite_->max_outdeg;
  switch (family_) {
    case TreeFamily::KaryRooted:
    case TreeFamily::KaryUnrooted:
      return k_;
    case TreeFamily::GraftedFreeEnd:
      return graft_at_.path.empty() ? 1 : k_;
    case TreeFamily::BilateralLine:
    case TreeFamily::UnilateralLeafLine:
      return 1;
  }
  return 1;
}

bool TreeModel::in_window(const VertexAddress& v) const {
  if (finite_) return true;  // membership is existence
  if (rooted_) return v.path.size() <= window_.down;
  return v.hops <= window_.up && v.level() <= static_cast<int>(window_.down);
}

std::uint32_t TreeModel::finite_id(const VertexAddress& v) const {
  return finite_->id_by_address.at(v);
}

std::uint32_t TreeModel::outdegree_raw(const VertexAddress& v) const {
  if (finite_) return static_cast<std::uint32_t>(finite_->children[finite_id(v)].size());
  switch (family_) {
    case TreeFamily::KaryRooted:
    case TreeFamily::KaryUnrooted:
      return k_;
    case TreeFamily::BilateralLine:
      return 1;
    case TreeFamily::UnilateralLeafLine:
      return (v.hops == 0 && v.path.empty()) ? 0 : 1;
    case TreeFamily::GraftedFreeEnd:
      return is_prefix(graft_at_.path, v.path) ? 1 : k_;
  }
  return 0;
}

bool TreeModel::validate_address(const VertexAddress& v, std::string* why) const {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (rooted_ && v.hops != 0) return fail("ancestor hops on a rooted model");
  if (finite_) {
    if (!finite_->id_by_address.count(v)) return fail("no such vertex");
    return true;
  }
  if (!rooted_ && v.hops >= 1 && !v.path.empty() && v.path[0] == 0)
    return fail("non-canonical: descent from an ancestor re-enters the spine (drop one hop)");
  VertexAddress cur{v.hops, {}};
  for (std::uint32_t slot : v.path) {
    if (slot >= outdegree_raw(cur))
      return fail("child slot " + std::to_string(slot) + " out of range");
    cur.path.push_back(slot);
  }
  return true;
}

void TreeModel::check_member(const VertexAddress& v) const {
  std::string why;
  if (!validate_address(v, &why))
    throw InputError("address '" + v.to_string(rooted_) + "': " + why);
  if (!in_window(v))
    throw WindowExhausted("vertex '" + v.to_string(rooted_) + "' lies outside the depth window");
}

VertexAddress TreeModel::resolve(const std::string& text) const {
  if (finite_) {
    auto it = finite_->id_of.find(text);
    if (it != finite_->id_of.end()) return finite_->address_of[it->second];
  }
  VertexAddress v = VertexAddress::parse(text);
  std::string why;
  if (!validate_address(v, &why)) throw InputError("address '" + text + "': " + why);
  if (!in_window(v))
    throw WindowExhausted("vertex '" + text + "' lies outside the depth window");
  return v;
}

std::string TreeModel::format(const VertexAddress& v) const {
  check_member(v);
  if (finite_) return finite_->name[finite_id(v)];
  return v.to_string(rooted_);
}

std::uint32_t TreeModel::outdegree(const VertexAddress& v) const {
  check_member(v);
  return outdegree_raw(v);
}

std::optional<VertexAddress> TreeModel::parent(const VertexAddress& v) const {
  return parent_n(v, 1);
}

std::optional<VertexAddress> TreeModel::parent_n(const VertexAddress& v, std::uint32_t n) const {
  check_member(v);
  std::uint32_t strip = std::min<std::uint32_t>(n, static_cast<std::uint32_t>(v.path.size()));
  VertexAddress cur = v;
  cur.path.resize(v.path.size() - strip);
  std::uint32_t rest = n - strip;
  if (rest > 0) {
    if (rooted_) return std::nullopt;  // would climb past the root
    if (cur.hops + rest > window_.up)
      throw WindowExhausted("parent^" + std::to_string(n) + " of '" + v.to_string(rooted_) +
                            "' lies above the depth window");
    cur.hops += rest;
  }
  return cur;
}

std::vector<VertexAddress> TreeModel::children_impl(const VertexAddress& v, bool clip) const {
  std::vector<VertexAddress> out;
  if (finite_) {
    for (std::uint32_t c : finite_->children[finite_id(v)])
      out.push_back(finite_->address_of[c]);
    return out;
  }
  std::uint32_t deg = outdegree_raw(v);
  std::uint32_t slot = 0;
  if (!rooted_ && v.path.empty() && v.hops > 0 && deg > 0) {
    out.push_back(VertexAddress{v.hops - 1, {}});  // slot 0: back toward the anchor
    slot = 1;
  }
  for (; slot < deg; ++slot) {
    VertexAddress c = v;
    c.path.push_back(slot);
    if (!in_window(c)) {
      if (clip) continue;
      throw WindowExhausted("children of '" + v.to_string(rooted_) +
                            "' leave the depth window");
    }
    out.push_back(c);
  }
  return out;
}

std::vector<VertexAddress> TreeModel::children(const VertexAddress& v) const {
  check_member(v);
  return children_impl(v, false);
}

std::vector<VertexAddress> TreeModel::children_clipped(const VertexAddress& v) const {
  check_member(v);
  return children_impl(v, true);
}

TreeModel TreeModel::with_window(DepthWindow w) const {
  if (finite_) throw InputError("finite models have a fixed window");
  TreeModel m = *this;
  if (m.rooted_) w.up = 0;
  m.window_ = w;
  if (m.family_ == TreeFamily::GraftedFreeEnd && m.graft_at_.path.size() > w.down)
    throw InputError("graft vertex lies outside the requested window");
  return m;
}

void TreeModel::check_depth_reach(const VertexAddress& u, std::uint32_t n) const {
  if (u.level() + static_cast<int>(n) > static_cast<int>(window_.down))
    throw WindowExhausted("child^" + std::to_string(n) + " of '" + u.to_string(rooted_) +
                          "' reaches below the depth window");
}

double TreeModel::gamma(const VertexAddress& u, std::uint32_t n) const {
  check_member(u);
  if (n == 0) return 1.0;
  if (finite_) {
    std::vector<std::uint32_t> frontier{finite_id(u)};
    for (std::uint32_t step = 0; step < n && !frontier.empty(); ++step) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t v : frontier)
        next.insert(next.end(), finite_->children[v].begin(), finite_->children[v].end());
      frontier = std::move(next);
    }
    return static_cast<double>(frontier.size());
  }
  if (family_ == TreeFamily::UnilateralLeafLine)
    return n <= u.hops ? 1.0 : 0.0;
  check_depth_reach(u, n);
  switch (family_) {
    case TreeFamily::KaryRooted:
    case TreeFamily::KaryUnrooted:
      return ipow(static_cast<double>(k_), n);
    case TreeFamily::BilateralLine:
      return 1.0;
    case TreeFamily::GraftedFreeEnd: {
      if (is_prefix(graft_at_.path, u.path)) return 1.0;
      if (is_strict_prefix(u.path, graft_at_.path)) {
        std::uint32_t d = static_cast<std::uint32_t>(graft_at_.path.size() - u.path.size());
        double kn = ipow(static_cast<double>(k_), n);
        if (n <= d) return kn;
        return kn - ipow(static_cast<double>(k_), n - d) + 1.0;
      }
      return ipow(static_cast<double>(k_), n);
    }
    default:
      return 0.0;  // unreachable
  }
}

std::vector<VertexAddress> TreeModel::children_n(const VertexAddress& u, std::uint32_t n) const {
  check_member(u);
  if (finite_) {
    std::vector<std::uint32_t> frontier{finite_id(u)};
    for (std::uint32_t step = 0; step < n && !frontier.empty(); ++step) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t v : frontier)
        next.insert(next.end(), finite_->children[v].begin(), finite_->children[v].end());
      frontier = std::move(next);
    }
    std::vector<VertexAddress> out;
    out.reserve(frontier.size());
    for (std::uint32_t v : frontier) out.push_back(finite_->address_of[v]);
    std::sort(out.begin(), out.end(), AddressOrder{});
    return out;
  }
  if (gamma(u, n) > static_cast<double>(window_limit()))
    throw WindowExhausted("child^" + std::to_string(n) + " enumeration of '" +
                          u.to_string(rooted_) + "' exceeds TREESHIFT_WINDOW_LIMIT");
  std::vector<VertexAddress> frontier{u};
  for (std::uint32_t step = 0; step < n && !frontier.empty(); ++step) {
    std::vector<VertexAddress> next;
    for (const auto& v : frontier) {
      auto kids = children_impl(v, false);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end(), AddressOrder{});
  return frontier;
}

std::vector<VertexAddress> TreeModel::window_vertices() const {
  const std::uint64_t limit = window_limit();
  VertexAddress top = rooted_ ? VertexAddress::root() : VertexAddress{window_.up, {}};
  std::vector<VertexAddress> out;
  std::vector<VertexAddress> stack{top};
  while (!stack.empty()) {
    VertexAddress v = std::move(stack.back());
    stack.pop_back();
    auto kids = children_impl(v, true);
    out.push_back(std::move(v));
    if (out.size() > limit)
      throw WindowExhausted("window enumeration exceeds TREESHIFT_WINDOW_LIMIT (" +
                            std::to_string(limit) + ")");
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
  }
  return out;
}

std::vector<VertexAddress> TreeModel::vertices_to_depth(std::uint32_t radius) const {
  const std::uint64_t limit = window_limit();
  VertexAddress start;  // root / anchor
  std::unordered_set<VertexAddress, AddressHash> seen{start};
  std::deque<std::pair<VertexAddress, std::uint32_t>> q{{start, 0}};
  std::vector<VertexAddress> out;
  while (!q.empty()) {
    auto [v, d] = q.front();
    q.pop_front();
    out.push_back(v);
    if (out.size() > limit)
      throw WindowExhausted("ball enumeration exceeds TREESHIFT_WINDOW_LIMIT");
    if (d == radius) continue;
    std::vector<VertexAddress> nbrs = children_impl(v, true);
    if (!(rooted_ && v.path.empty())) {
      if (!rooted_ && v.path.empty() && v.hops == window_.up) {
        // window top: parent not visible
      } else if (!finite_ || finite_->parent[finite_id(v)] >= 0) {
        auto p = parent_n(v, 1);
        if (p) nbrs.push_back(*p);
      }
    }
    for (auto& w : nbrs)
      if (seen.insert(w).second) q.emplace_back(std::move(w), d + 1);
  }
  std::sort(out.begin(), out.end(), AddressOrder{});
  return out;
}

ShapeClass TreeModel::classify_shape() const {
  if (rooted_) return ShapeClass::Rooted;
  if (!opaque_) {
    switch (family_) {
      case TreeFamily::KaryUnrooted:
        return k_ >= 2 ? ShapeClass::HasBranchVertex : ShapeClass::BilateralLine;
      case TreeFamily::BilateralLine:
        return ShapeClass::BilateralLine;
      case TreeFamily::UnilateralLeafLine:
        return ShapeClass::UnilateralLeafLine;
      default:
        break;
    }
  }
  // Opaque: only in-window observations may be used, and no finite view
  // certifies line shape.
  if (branch_witness()) return ShapeClass::HasBranchVertex;
  return ShapeClass::OtherUnrooted;
}

std::optional<VertexAddress> TreeModel::branch_witness() const {
  if (finite_) return finite_->branch;
  if (!opaque_) {
    switch (family_) {
      case TreeFamily::KaryRooted:
        return k_ >= 2 ? std::optional<VertexAddress>(VertexAddress::root()) : std::nullopt;
      case TreeFamily::KaryUnrooted:
        return k_ >= 2 ? std::optional<VertexAddress>(VertexAddress::anchor()) : std::nullopt;
      case TreeFamily::GraftedFreeEnd:
        if (k_ >= 2 && !graft_at_.path.empty()) return VertexAddress::root();
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }
  for (const auto& v : vertices_to_depth(std::min<std::uint32_t>(4, window_.down)))
    if (outdegree_raw(v) >= 2) return v;
  return std::nullopt;
}

FreeEndVerdict TreeModel::free_end_verdict(std::uint32_t depth_bound) const {
  if (!leafless()) throw DomainError("free-end analysis requires a leafless tree");
  if (!opaque_) {
    switch (family_) {
      case TreeFamily::KaryRooted:
        if (k_ >= 2) return {FreeEndVerdict::Kind::NoFreeEnd, std::nullopt, 0};
        return {FreeEndVerdict::Kind::HasFreeEnd, VertexAddress::root(), 0};
      case TreeFamily::KaryUnrooted:
        if (k_ >= 2) return {FreeEndVerdict::Kind::NoFreeEnd, std::nullopt, 0};
        return {FreeEndVerdict::Kind::HasFreeEnd, VertexAddress::anchor(), 0};
      case TreeFamily::BilateralLine:
        return {FreeEndVerdict::Kind::HasFreeEnd, VertexAddress::anchor(), 0};
      case TreeFamily::GraftedFreeEnd:
        if (k_ >= 2) return {FreeEndVerdict::Kind::HasFreeEnd, graft_at_, 0};
        return {FreeEndVerdict::Kind::HasFreeEnd, VertexAddress::root(), 0};
      default:
        break;
    }
  }
  return {FreeEndVerdict::Kind::UnknownUpToDepth, std::nullopt,
          std::min<std::uint32_t>(depth_bound, window_.down)};
}

std::uint32_t TreeModel::dist_to_set(const VertexAddress& v, const VertexSet& H) const {
  check_member(v);
  std::unordered_set<VertexAddress, AddressHash> target;
  if (H.generation_of) {
    check_member(*H.generation_of);
    if (leafless())
      return static_cast<std::uint32_t>(std::abs(v.level() - H.generation_of->level()));
    int want = H.generation_of->level();
    for (const auto& w : window_vertices())
      if (w.level() == want) target.insert(w);
  } else {
    if (H.members.empty()) throw InputError("dist_to_set: empty vertex set");
    for (const auto& w : H.members) {
      check_member(w);
      target.insert(w);
    }
  }
  const std::uint64_t limit = window_limit();
  std::unordered_set<VertexAddress, AddressHash> seen{v};
  std::deque<std::pair<VertexAddress, std::uint32_t>> q{{v, 0}};
  std::uint64_t popped = 0;
  while (!q.empty()) {
    auto [cur, d] = q.front();
    q.pop_front();
    if (target.count(cur)) return d;
    if (++popped > limit)
      throw WindowExhausted("dist_to_set search exceeds TREESHIFT_WINDOW_LIMIT");
    std::vector<VertexAddress> nbrs = children_impl(cur, true);
    bool at_top = !rooted_ && cur.path.empty() && cur.hops == window_.up;
    bool at_root = rooted_ && (finite_ ? finite_->parent[finite_id(cur)] < 0 : cur.path.empty());
    if (!at_top && !at_root) {
      auto p = parent_n(cur, 1);
      if (p) nbrs.push_back(*p);
    }
    for (auto& w : nbrs)
      if (seen.insert(w).second) q.emplace_back(std::move(w), d + 1);
  }
  throw WindowExhausted("dist_to_set: no member of H reachable inside the window");
}

bool TreeModel::uniform_below(const VertexAddress& u) const {
  if (finite_) return false;
  if (family_ == TreeFamily::GraftedFreeEnd)
    return !is_strict_prefix(u.path, graft_at_.path);
  return true;
}

}  // namespace treeshift
