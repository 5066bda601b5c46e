#pragma once

#include <complex>
#include <cstdint>
#include <map>

#include "treeshift/address.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

// Finitely supported complex function on the vertex set, kept canonical:
// exact zeros are never stored, entries iterate in address order.
class TreeFunction {
public:
  using Map = std::map<VertexAddress, std::complex<double>, AddressOrder>;

  TreeFunction() = default;
  static TreeFunction point_mass(const VertexAddress& v, std::complex<double> a = 1.0);

  void set(const VertexAddress& v, std::complex<double> a);
  void add(const VertexAddress& v, std::complex<double> a);
  std::complex<double> at(const VertexAddress& v) const;

  const Map& entries() const { return m_; }
  std::size_t support_size() const { return m_.size(); }
  bool empty() const { return m_.empty(); }
  int max_level() const;  // over the support; InputError when empty

  TreeFunction& operator+=(const TreeFunction& o);
  TreeFunction& operator-=(const TreeFunction& o);
  TreeFunction& operator*=(std::complex<double> c);
  friend TreeFunction operator+(TreeFunction a, const TreeFunction& b) { return a += b; }
  friend TreeFunction operator-(TreeFunction a, const TreeFunction& b) { return a -= b; }
  friend TreeFunction operator*(std::complex<double> c, TreeFunction f) { return f *= c; }
  bool operator==(const TreeFunction&) const = default;

private:
  Map m_;
};

// (sum_v |f(v)|^p lambda_v)^{1/p}; requires p >= 1.
double norm_p(const TreeFunction& f, const WeightMap& lam, const TreeModel& model, double p);

// Bilinear pairing sum_v f(v) g(v) lambda_v realizing the duality between
// L^p and L^q (no conjugation; g acts as the kernel of a functional).
std::complex<double> dual_pairing(const TreeFunction& f, const TreeFunction& g,
                                  const WeightMap& lam, const TreeModel& model);

// Deterministic pseudo-random function: `support_size` distinct vertices from
// the ball of the given radius around the root/anchor, coefficients in the
// complex unit square.
TreeFunction random_tree_function(const TreeModel& model, std::uint32_t support_depth,
                                  std::size_t support_size, std::uint64_t seed);

}  // namespace treeshift
