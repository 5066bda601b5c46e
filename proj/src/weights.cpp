#include "treeshift/weights.hpp"

#include <cmath>

#include "treeshift/errors.hpp"

namespace treeshift {

namespace {
void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw InputError(std::string(what) + " must be a positive finite number");
}
}  // namespace

WeightMap WeightMap::unit() { return WeightMap{}; }

WeightMap WeightMap::geometric(double base) {
  check_positive(base, "geometric base");
  WeightMap w;
  w.kind_ = WeightKind::Geometric;
  w.base_ = base;
  return w;
}

WeightMap WeightMap::distance_to_h(double s, const VertexAddress& anchor) {
  check_positive(s, "distance weight scale s");
  WeightMap w;
  w.kind_ = WeightKind::DistanceToH;
  w.base_ = s;
  w.anchor_ = anchor;
  return w;
}

WeightMap WeightMap::table(Table entries) {
  if (entries.empty()) throw InputError("weight table has no entries");
  for (const auto& [v, x] : entries) check_positive(x, "table weight");
  WeightMap w;
  w.kind_ = WeightKind::Table;
  w.table_ = std::move(entries);
  return w;
}

double WeightMap::at(const TreeModel& model, const VertexAddress& v) const {
  switch (kind_) {
    case WeightKind::Unit:
      return 1.0;
    case WeightKind::Geometric:
      return std::pow(base_, v.level());
    case WeightKind::DistanceToH: {
      TreeModel::VertexSet h;
      h.generation_of = anchor_;
      return std::pow(base_, -static_cast<double>(model.dist_to_set(v, h)));
    }
    case WeightKind::Table: {
      auto it = table_.find(v);
      if (it == table_.end())
        throw InputError("no weight entry for vertex '" + v.to_string(model.rooted()) + "'");
      return it->second;
    }
  }
  return 1.0;
}

bool WeightMap::depth_uniform(const TreeModel& model) const {
  switch (kind_) {
    case WeightKind::Unit:
    case WeightKind::Geometric:
      return true;
    case WeightKind::DistanceToH:
      // On a leafless model dist(v, H) is exactly |level(v) - level(anchor)|.
      return model.leafless();
    case WeightKind::Table:
      return false;
  }
  return false;
}

double WeightMap::value_at_level(int level) const {
  switch (kind_) {
    case WeightKind::Unit:
      return 1.0;
    case WeightKind::Geometric:
      return std::pow(base_, level);
    case WeightKind::DistanceToH:
      return std::pow(base_, -std::abs(static_cast<double>(level - anchor_.level())));
    case WeightKind::Table:
      throw DomainError("table weights are not a function of the level");
  }
  return 1.0;
}

WeightMap WeightMap::pointwise_pow(double e) const {
  switch (kind_) {
    case WeightKind::Unit:
      return unit();
    case WeightKind::Geometric:
      return geometric(std::pow(base_, e));
    case WeightKind::DistanceToH:
      // (s^{-d})^e = (s^e)^{-d}
      return distance_to_h(std::pow(base_, e), anchor_);
    case WeightKind::Table: {
      Table t;
      for (const auto& [v, x] : table_) t.emplace(v, std::pow(x, e));
      return table(std::move(t));
    }
  }
  return unit();
}

}  // namespace treeshift
