#include "treeshift/address.hpp"

#include <algorithm>
#include <charconv>

#include "treeshift/errors.hpp"

namespace treeshift {

std::string VertexAddress::to_string(bool rooted) const {
  std::string out;
  if (rooted) {
    if (hops != 0) throw InputError("rooted address cannot have ancestor hops");
    if (path.empty()) return "root";
  } else {
    out = "^" + std::to_string(hops);
    if (path.empty()) return out;
    out += ".";
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(path[i]);
  }
  return out;
}

namespace {

std::uint32_t parse_u32(const std::string& text, std::size_t begin, std::size_t end) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + begin, text.data() + end, value);
  if (ec != std::errc{} || ptr != text.data() + end)
    throw InputError("bad address component in '" + text + "'");
  return value;
}

}  // namespace

VertexAddress VertexAddress::parse(const std::string& text) {
  if (text.empty() || text == "root" || text == "anchor") return {};
  VertexAddress v;
  std::size_t pos = 0;
  if (text[0] == '^') {
    std::size_t dot = text.find('.', 1);
    std::size_t end = dot == std::string::npos ? text.size() : dot;
    if (end == 1) throw InputError("missing hop count in '" + text + "'");
    v.hops = parse_u32(text, 1, end);
    if (dot == std::string::npos) return v;
    pos = dot + 1;
  }
  while (true) {
    std::size_t dot = text.find('.', pos);
    std::size_t end = dot == std::string::npos ? text.size() : dot;
    if (end == pos) throw InputError("empty address component in '" + text + "'");
    v.path.push_back(parse_u32(text, pos, end));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return v;
}

bool AddressOrder::operator()(const VertexAddress& a, const VertexAddress& b) const {
  // Written from the top of a window with D >= max(hops), the full descent
  // path of an address is (D - hops) zeros followed by `path`; canonical
  // addresses with hops >= 1 never start `path` with 0, so the comparison
  // below agrees with lexicographic order of those full paths.
  if (a.hops != b.hops) {
    if (a.hops > b.hops) return a.path.empty();
    return !b.path.empty();
  }
  return std::lexicographical_compare(a.path.begin(), a.path.end(),
                                      b.path.begin(), b.path.end());
}

std::size_t AddressHash::operator()(const VertexAddress& v) const {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ v.hops;
  for (std::uint32_t s : v.path) h = h * 0x100000001b3ull ^ (s + 1);
  return h;
}

}  // namespace treeshift
