#pragma once

#include <map>

#include "treeshift/address.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

enum class WeightKind { Unit, Geometric, DistanceToH, Table };

// Strictly positive vertex weights lambda. Unit / geometric-in-depth /
// distance-to-generation kinds are closed-form; Table pins explicit values.
class WeightMap {
public:
  using Table = std::map<VertexAddress, double, AddressOrder>;

  static WeightMap unit();
  static WeightMap geometric(double base);                          // lambda_v = base^level(v)
  static WeightMap distance_to_h(double s, const VertexAddress& anchor);  // s^{-dist(v,H)}
  static WeightMap table(Table entries);

  WeightKind kind() const { return kind_; }
  double geometric_base() const { return base_; }
  double h_scale() const { return base_; }
  const VertexAddress& h_anchor() const { return anchor_; }
  const Table& entries() const { return table_; }

  double at(const TreeModel& model, const VertexAddress& v) const;

  // True when lambda depends on the level alone (then value_at_level applies).
  bool depth_uniform(const TreeModel& model) const;
  double value_at_level(int level) const;

  // Pointwise power lambda^e (companion measures, dual weights).
  WeightMap pointwise_pow(double e) const;

private:
  WeightKind kind_ = WeightKind::Unit;
  double base_ = 1.0;  // geometric base, or the scale s of distance weights
  VertexAddress anchor_;
  Table table_;
};

}  // namespace treeshift
