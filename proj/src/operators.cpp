#include "treeshift/operators.hpp"

#include <cmath>

#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"

namespace treeshift {

namespace {

void check_exponent(double e, const char* name) {
  if (!(e >= 1.0) || !std::isfinite(e))
    throw DomainError(std::string(name) + " must lie in [1, infinity)");
}

}  // namespace

TreeFunction apply_S(const TreeFunction& f, const TreeModel& model) {
  TreeFunction out;
  for (const auto& [u, a] : f.entries())
    for (const auto& v : model.children(u)) out.add(v, a);
  return out;
}

TreeFunction apply_S_pow(const TreeFunction& f, std::uint32_t n, const TreeModel& model) {
  TreeFunction out = f;
  for (std::uint32_t i = 0; i < n; ++i) out = apply_S(out, model);
  return out;
}

TreeFunction apply_Sstar(const TreeFunction& g, const WeightMap& lam, const TreeModel& model) {
  TreeFunction out;
  for (const auto& [v, a] : g.entries()) {
    auto u = model.parent(v);
    if (!u) continue;  // the root is nobody's child
    out.add(*u, a * lam.at(model, v) / lam.at(model, *u));
  }
  return out;
}

TreeFunction apply_B(const TreeFunction& f, const TreeModel& model) {
  TreeFunction out;
  for (const auto& [v, a] : f.entries()) {
    auto u = model.parent(v);
    if (!u) continue;
    out.add(*u, a);
  }
  return out;
}

TreeFunction apply_B_pow(const TreeFunction& f, std::uint32_t n, const TreeModel& model) {
  TreeFunction out = f;
  for (std::uint32_t i = 0; i < n; ++i) out = apply_B(out, model);
  return out;
}

TreeFunction apply_T_n(const TreeFunction& g, std::uint32_t n, const TreeModel& model) {
  TreeFunction out;
  for (const auto& [u, a] : g.entries()) {
    double gam = model.gamma(u, n);
    if (gam == 0.0)
      throw DomainError("T_" + std::to_string(n) + " undefined: no depth-" + std::to_string(n) +
                        " descendants below '" + model.format(u) + "'");
    for (const auto& v : model.children_n(u, n)) out.add(v, a / gam);
  }
  return out;
}

namespace {

NormBound enumerate_child_ratio(const WeightMap& lam, const TreeModel& model) {
  double best = 0.0;
  for (const auto& u : model.window_vertices()) {
    double lu = lam.at(model, u);
    KahanSum s;
    for (const auto& c : model.children_clipped(u)) s.add(lam.at(model, c) / lu);
    best = std::max(best, s.value());
  }
  return {best, model.is_finite()};
}

NormBound enumerate_backward_ratio(const WeightMap& lam, double q, const TreeModel& model) {
  double best = 0.0;
  for (const auto& u : model.window_vertices()) {
    double deg = model.outdegree(u);
    if (deg == 0) continue;
    double base = std::pow(deg, q - 1.0) * lam.at(model, u);
    for (const auto& c : model.children_clipped(u))
      best = std::max(best, base / lam.at(model, c));
  }
  return {best, model.is_finite()};
}

// For distance weights the child/parent ratio is s below the anchor's
// generation and 1/s at or above it; which regimes occur depends on the
// parent levels the family realizes.
struct RatioRegimes {
  bool below = false;        // some parent level < anchor level
  bool at_or_above = false;  // some parent level >= anchor level
};

RatioRegimes distance_regimes(const TreeModel& model, int anchor_level) {
  RatioRegimes r;
  if (model.rooted()) {
    r.at_or_above = true;  // parent levels 0, 1, 2, ...
    r.below = anchor_level >= 1;
  } else if (model.family() == TreeFamily::UnilateralLeafLine) {
    r.below = true;  // parent levels ..., -2, -1
    r.at_or_above = anchor_level <= -1;
  } else {
    r.below = true;  // parent levels cover all integers
    r.at_or_above = true;
  }
  return r;
}

}  // namespace

NormBound shift_norm(const WeightMap& lam, double p, const TreeModel& model) {
  check_exponent(p, "p");
  NormBound sup;
  if (model.is_finite() || lam.kind() == WeightKind::Table) {
    sup = enumerate_child_ratio(lam, model);
  } else {
    double deg = model.max_outdegree();
    switch (lam.kind()) {
      case WeightKind::Unit:
        sup = {deg, true};
        break;
      case WeightKind::Geometric:
        sup = {deg * lam.geometric_base(), true};
        break;
      case WeightKind::DistanceToH: {
        double s = lam.h_scale();
        auto reg = distance_regimes(model, lam.h_anchor().level());
        double r = 0.0;
        if (reg.below) r = std::max(r, s);
        if (reg.at_or_above) r = std::max(r, 1.0 / s);
        sup = {deg * r, true};
        break;
      }
      default:
        sup = enumerate_child_ratio(lam, model);
    }
  }
  return {std::pow(sup.value, 1.0 / p), sup.exact};
}

NormBound backward_bound(const WeightMap& lam, double q, const TreeModel& model) {
  check_exponent(q, "q");
  if (model.is_finite() || lam.kind() == WeightKind::Table)
    return enumerate_backward_ratio(lam, q, model);
  double deg = model.max_outdegree();
  switch (lam.kind()) {
    case WeightKind::Unit:
      return {std::pow(deg, q - 1.0), true};
    case WeightKind::Geometric:
      return {std::pow(deg, q - 1.0) / lam.geometric_base(), true};
    case WeightKind::DistanceToH: {
      double s = lam.h_scale();
      auto reg = distance_regimes(model, lam.h_anchor().level());
      // edge ratio lambda_parent / lambda_child: 1/s below the anchor's
      // generation, s at or above it
      double r = 0.0;
      if (reg.below) r = std::max(r, 1.0 / s);
      if (reg.at_or_above) r = std::max(r, s);
      return {std::pow(deg, q - 1.0) * r, true};
    }
    default:
      return enumerate_backward_ratio(lam, q, model);
  }
}

WeightMap phi_companion_weights(const WeightMap& lam, double q) {
  check_exponent(q, "q");
  return lam.pointwise_pow(1.0 - q);
}

TreeFunction phi_map(const TreeFunction& f, const WeightMap& lam, const TreeModel& model) {
  TreeFunction out;
  for (const auto& [v, a] : f.entries()) out.set(v, a / lam.at(model, v));
  return out;
}

TreeFunction phi_inverse(const TreeFunction& g, const WeightMap& lam, const TreeModel& model) {
  TreeFunction out;
  for (const auto& [v, a] : g.entries()) out.set(v, a * lam.at(model, v));
  return out;
}

double check_unitary_equivalence(const TreeFunction& f, const WeightMap& lam, double q,
                                 const TreeModel& model) {
  check_exponent(q, "q");
  TreeFunction lhs = apply_Sstar(phi_map(f, lam, model), lam, model);
  TreeFunction rhs = phi_map(apply_B(f, model), lam, model);
  return norm_p(lhs - rhs, lam, model, q);
}

}  // namespace treeshift
