#include "treeshift/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "treeshift/dynamics.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"
#include "treeshift/operators.hpp"

namespace treeshift {

namespace {

void check_q(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("exponent must satisfy q >= 1");
}

std::uint32_t support_depth(const TreeFunction& f) {
  std::uint32_t d = 0;
  for (const auto& [v, a] : f.entries()) {
    (void)a;
    d = std::max<std::uint32_t>(d, static_cast<std::uint32_t>(v.path.size()));
  }
  return d;
}

// sum over w in child^d(u) of gamma(w, m)^q * lambda_w.  Uniform subtrees
// collapse to a closed form; otherwise recurse one level at a time.
double cross_sum(const TreeModel& model, const WeightMap& lam, double q,
                 const VertexAddress& u, std::uint32_t d, std::uint32_t m) {
  if (model.uniform_below(u) && lam.depth_uniform(model)) {
    const double gd = model.gamma(u, d);
    if (gd == 0.0) return 0.0;
    const double deg = static_cast<double>(model.outdegree(u));
    const double gm = ipow(deg, m);
    return gd * std::pow(gm, q) * lam.value_at_level(u.level() + static_cast<int>(d));
  }
  if (d == 0) return std::pow(model.gamma(u, m), q) * lam.at(model, u);
  KahanSum acc;
  for (const auto& c : model.children(u)) acc.add(cross_sum(model, lam, q, c, d - 1, m));
  return acc.value();
}

// (B^m T_n c)(v) for one stage, exact.
std::complex<double> stage_orbit_eval(const TreeModel& model, const ShadowStage& stage,
                                      std::uint32_t m, const VertexAddress& v) {
  if (stage.correction.empty()) return {};
  if (m < stage.n) {
    const std::uint32_t d = stage.n - m;
    const auto u = model.parent_n(v, d);
    if (!u) return {};
    const auto cu = stage.correction.at(*u);
    if (cu == std::complex<double>{}) return {};
    // every w in child^m(v) lies in child^n(u) and carries c(u)/gamma(u, n)
    return model.gamma(v, m) * cu / model.gamma(*u, stage.n);
  }
  const std::uint32_t d = m - stage.n;
  KahanComplexSum acc;
  for (const auto& [x, a] : stage.correction.entries()) {
    const auto p = model.parent_n(x, d);
    if (p && *p == v) acc.add(a);
  }
  return acc.value();
}

// Structured stages must not meet at common vertices, neither in f itself nor
// in any orbit image; the spacing n_{j} + depth(c_j) < n_{j+1} guarantees both.
void check_stage_spacing(const ShadowVector& vec) {
  std::int64_t prev_end = -1;
  for (const auto& stage : vec.stages) {
    if (stage.correction.empty()) continue;
    const std::int64_t n = stage.n;
    if (n <= prev_end)
      throw DomainError("shadow stages interleave in depth; exact error accounting needs "
                        "spacing n_k + depth(c_k) < n_{k+1}");
    prev_end = n + support_depth(stage.correction);
  }
}

// Exact ||B^{n_k} f - g_k||_q for every stage, one shared code path.
std::vector<double> exact_errors(const ShadowVector& vec, const ShadowPlan& plan,
                                 const TreeModel& model, const WeightMap& lam) {
  const double q = plan.q;
  const std::size_t m = vec.stages.size();
  check_stage_spacing(vec);
  std::vector<double> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t nk = vec.stages[k].n;
    KahanSum total;
    // cross terms of the not-yet-arrived stages, in closed form
    for (std::size_t j = k + 1; j < m; ++j) {
      const ShadowStage& sj = vec.stages[j];
      const std::uint32_t d = sj.n - nk;
      for (const auto& [u, cu] : sj.correction.entries()) {
        const double gu = model.gamma(u, sj.n);
        const double scale = std::pow(std::abs(cu) / gu, q);
        total.add(scale * cross_sum(model, lam, q, u, d, nk));
      }
    }
    // explicit residual: already-passed stages, the current stage, the
    // perturbation, minus the target
    TreeFunction resid;
    for (std::size_t j = 0; j < k; ++j)
      resid += apply_B_pow(vec.stages[j].correction, nk - vec.stages[j].n, model);
    resid += vec.stages[k].correction;
    if (!vec.extra.empty()) resid += apply_B_pow(vec.extra, nk, model);
    resid -= plan.targets[k];
    // where the residual lives, swap the per-stage tail contributions
    // |t_j|^q for the true |sum_j t_j + r|^q
    for (const auto& [v, rv] : resid.entries()) {
      KahanComplexSum tail;
      double counted = 0.0;
      for (std::size_t j = k + 1; j < m; ++j) {
        const auto t = stage_orbit_eval(model, vec.stages[j], nk, v);
        tail.add(t);
        counted += std::pow(std::abs(t), q);
      }
      const double lv = lam.at(model, v);
      total.add((std::pow(std::abs(tail.value() + rv), q) - counted) * lv);
    }
    out.push_back(std::pow(std::max(total.value(), 0.0), 1.0 / q));
  }
  return out;
}

}  // namespace

std::complex<double> ShadowVector::eval(const TreeModel& model, const VertexAddress& v) const {
  KahanComplexSum acc;
  for (const auto& stage : stages) {
    if (stage.correction.empty()) continue;
    const auto u = model.parent_n(v, stage.n);
    if (!u) continue;
    const auto cu = stage.correction.at(*u);
    if (cu == std::complex<double>{}) continue;
    acc.add(cu / model.gamma(*u, stage.n));
  }
  acc.add(extra.at(v));
  return acc.value();
}

std::complex<double> ShadowVector::orbit_eval(const TreeModel& model, std::uint32_t m,
                                              const VertexAddress& v) const {
  KahanComplexSum acc;
  for (const auto& stage : stages) acc.add(stage_orbit_eval(model, stage, m, v));
  for (const auto& [x, a] : extra.entries()) {
    const auto p = model.parent_n(x, m);
    if (p && *p == v) acc.add(a);
  }
  return acc.value();
}

ShadowPlan plan_schedule(const TreeModel& model, const WeightMap& lam, double q, double eps,
                         const std::vector<TreeFunction>& targets) {
  check_q(q);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive and finite");
  if (targets.empty()) throw InputError("at least one target is required");
  if (!model.rooted()) throw DomainError("the shadowing constructor needs a rooted model");
  if (!model.leafless())
    throw DomainError("the shadowing constructor needs a leafless model; leaf at '" +
                      model.format(*model.leaf_witness()) + "'");

  std::uint32_t depth_cap = 0;
  for (const auto& g : targets)
    for (const auto& [v, a] : g.entries()) {
      (void)a;
      model.outdegree(v);  // validates membership and window
      depth_cap = std::max<std::uint32_t>(depth_cap, static_cast<std::uint32_t>(v.path.size()));
    }

  ShadowPlan plan;
  plan.targets = targets;
  plan.q = q;
  plan.eps = eps;
  const std::size_t m = targets.size();
  plan.budgets.assign(m, eps);

  const std::uint32_t down = model.window().down;
  // stage j at power n contributes to stage k's error^q at most
  // sum_{u in supp g_j} (|g_j(u)| / gamma(u, n))^q * cross_sum(u, n - n_k, n_k)
  auto pair_cost = [&](std::size_t j, std::uint32_t n, std::uint32_t nk,
                       const VertexAddress** worst) -> double {
    KahanSum acc;
    double top = -1.0;
    for (const auto& [u, a] : targets[j].entries()) {
      const double gu = model.gamma(u, n);
      const double term =
          std::pow(std::abs(a) / gu, q) * cross_sum(model, lam, q, u, n - nk, nk);
      acc.add(term);
      if (worst && term > top) {
        top = term;
        *worst = &u;
      }
    }
    return acc.value();
  };

  for (std::size_t j = 0; j < m; ++j) {
    std::uint32_t n = (j == 0) ? 1 : plan.schedule[j - 1] + depth_cap + 1;
    for (;;) {
      if (n + depth_cap > down) {
        // report the dominating obstruction at the last representable power
        const std::uint32_t last = down - depth_cap;
        std::ostringstream msg;
        msg << "window depth " << down << " exhausted while scheduling stage " << (j + 1);
        const VertexAddress* worst = nullptr;
        double worst_cost = -1.0;
        std::size_t worst_k = 0;
        for (std::size_t k = 0; k < j; ++k) {
          const VertexAddress* w = nullptr;
          const double c = pair_cost(j, last, plan.schedule[k], &w);
          if (c > worst_cost) {
            worst_cost = c;
            worst = w;
            worst_k = k;
          }
        }
        if (worst)
          msg << ": cross term at vertex '" << model.format(*worst) << "' against stage "
              << (worst_k + 1) << " still " << format_double(std::pow(worst_cost, 1.0 / q))
              << " at power " << last << "; widen the window or relax eps";
        throw WindowExhausted(msg.str());
      }
      bool ok = true;
      for (std::size_t k = 0; k < j && ok; ++k) {
        const double budget =
            std::pow(plan.budgets[k], q) * std::ldexp(1.0, -static_cast<int>(j - k));
        if (pair_cost(j, n, plan.schedule[k], nullptr) > budget) ok = false;
      }
      if (ok) break;
      ++n;
    }
    plan.schedule.push_back(n);
  }

  plan.predicted.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    KahanSum acc;
    for (std::size_t j = k + 1; j < m; ++j)
      acc.add(pair_cost(j, plan.schedule[j], plan.schedule[k], nullptr));
    plan.predicted[k] = std::pow(acc.value(), 1.0 / q);
  }
  return plan;
}

ShadowBuild build_shadow_vector(const ShadowPlan& plan, const TreeModel& model,
                                const WeightMap& lam) {
  check_q(plan.q);
  const std::size_t m = plan.targets.size();
  if (plan.schedule.size() != m)
    throw InputError("plan schedule and targets disagree in length");
  ShadowBuild out;
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t nk = plan.schedule[k];
    if (k > 0 && nk <= plan.schedule[k - 1])
      throw InputError("plan schedule must be strictly increasing");
    TreeFunction c = plan.targets[k];
    for (std::size_t j = 0; j < k; ++j)
      c -= apply_B_pow(out.vec.stages[j].correction, nk - plan.schedule[j], model);
    for (const auto& [u, a] : c.entries()) {
      (void)a;
      model.gamma(u, nk);  // window reach for the structured support
    }
    out.vec.stages.push_back(ShadowStage{nk, std::move(c)});
  }
  out.errors = verify_shadow(out.vec, plan, model, lam);
  out.norm = shadow_norm(out.vec, model, lam, plan.q);
  return out;
}

std::vector<double> verify_shadow(const ShadowVector& vec, const ShadowPlan& plan,
                                  const TreeModel& model, const WeightMap& lam) {
  check_q(plan.q);
  if (vec.stages.size() != plan.targets.size())
    throw InputError("shadow vector and plan disagree on the number of stages");
  for (std::size_t k = 0; k < vec.stages.size(); ++k)
    if (k < plan.schedule.size() && vec.stages[k].n != plan.schedule[k])
      throw InputError("shadow vector stage powers disagree with the plan schedule");
  return exact_errors(vec, plan, model, lam);
}

double shadow_norm(const ShadowVector& vec, const TreeModel& model, const WeightMap& lam,
                   double q) {
  check_q(q);
  check_stage_spacing(vec);
  KahanSum total;
  for (const auto& stage : vec.stages)
    for (const auto& [u, cu] : stage.correction.entries())
      total.add(std::pow(std::abs(cu), q) * omega(model, lam, q, u, stage.n));
  for (const auto& [v, ev] : vec.extra.entries()) {
    KahanComplexSum structured;
    double counted = 0.0;
    for (const auto& stage : vec.stages) {
      if (stage.correction.empty()) continue;
      const auto u = model.parent_n(v, stage.n);
      if (!u) continue;
      const auto cu = stage.correction.at(*u);
      if (cu == std::complex<double>{}) continue;
      const auto t = cu / model.gamma(*u, stage.n);
      structured.add(t);
      counted += std::pow(std::abs(t), q);
    }
    total.add((std::pow(std::abs(structured.value() + ev), q) - counted) * lam.at(model, v));
  }
  return std::pow(std::max(total.value(), 0.0), 1.0 / q);
}

}  // namespace treeshift
