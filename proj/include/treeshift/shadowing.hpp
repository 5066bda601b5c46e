#pragma once

#include "treeshift/function.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

struct ShadowStage {
  std::uint32_t n = 0;       // the power of B this stage serves
  TreeFunction correction;   // c_k; the vector accumulates T_{n_k} c_k
};

struct ShadowPlan {
  std::vector<TreeFunction> targets;  // g_1 ... g_m
  double q = 2.0;
  double eps = 1e-3;
  std::vector<std::uint32_t> schedule;  // n_1 < ... < n_m
  std::vector<double> budgets;          // per-stage error budgets
  std::vector<double> predicted;        // planned bound on each stage error
};

// f = sum_k T_{n_k} c_k + extra, kept structural: T_{n_k} c_k has gamma-fold
// support and is never materialized; norms and orbit errors come from closed
// forms over the stage supports.
struct ShadowVector {
  std::vector<ShadowStage> stages;
  TreeFunction extra;  // explicit perturbation component

  std::complex<double> eval(const TreeModel& model, const VertexAddress& v) const;
  // (B^m f)(v), exact, via per-stage closed forms.
  std::complex<double> orbit_eval(const TreeModel& model, std::uint32_t m,
                                  const VertexAddress& v) const;
};

// Chooses n_1 < ... < n_m so that under the no-interference spacing the
// predicted stage errors fall below the budgets. Throws WindowExhausted
// naming the blocking vertex when the window cannot absorb the decay.
ShadowPlan plan_schedule(const TreeModel& model, const WeightMap& lam, double q, double eps,
                         const std::vector<TreeFunction>& targets);

struct ShadowBuild {
  ShadowVector vec;
  std::vector<double> errors;  // ||B^{n_k} f - g_k||_q per stage, exact
  double norm = 0.0;           // ||f||_q, exact
};

ShadowBuild build_shadow_vector(const ShadowPlan& plan, const TreeModel& model,
                                const WeightMap& lam);

// Recomputes all stage errors of a (possibly perturbed) shadow vector against
// the plan targets; build_shadow_vector reports exactly this computation.
std::vector<double> verify_shadow(const ShadowVector& vec, const ShadowPlan& plan,
                                  const TreeModel& model, const WeightMap& lam);

double shadow_norm(const ShadowVector& vec, const TreeModel& model, const WeightMap& lam,
                   double q);

}  // namespace treeshift
