#pragma once

#include "treeshift/function.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

// (Sf)(v) = f(parent(v)), zero at the root.
TreeFunction apply_S(const TreeFunction& f, const TreeModel& model);
TreeFunction apply_S_pow(const TreeFunction& f, std::uint32_t n, const TreeModel& model);

// (S*g)(u) = sum_{v in child(u)} g(v) lambda_v / lambda_u  (adjoint on the dual).
TreeFunction apply_Sstar(const TreeFunction& g, const WeightMap& lam, const TreeModel& model);

// (Bf)(u) = sum_{v in child(u)} f(v).
TreeFunction apply_B(const TreeFunction& f, const TreeModel& model);
TreeFunction apply_B_pow(const TreeFunction& f, std::uint32_t n, const TreeModel& model);

// (T_n g)(v) = g(parent^n(v)) / gamma(parent^n(v), n): the natural right
// inverse of B^n; needs child^n nonempty below the support.
TreeFunction apply_T_n(const TreeFunction& g, std::uint32_t n, const TreeModel& model);

struct NormBound {
  double value = 0.0;
  bool exact = true;  // false: certified lower estimate, limited by the window
};

// ||S|| = (sup_u sum_{v in child(u)} lambda_v/lambda_u)^{1/p}.
NormBound shift_norm(const WeightMap& lam, double p, const TreeModel& model);

// M = sup_{w != root} gamma(parent(w))^{q-1} lambda_{parent(w)} / lambda_w;
// guarantees ||B g||_q <= M^{1/q} ||g||_q.
NormBound backward_bound(const WeightMap& lam, double q, const TreeModel& model);

// Companion weights mu with mu_u lambda_u^{q-1} = 1.
WeightMap phi_companion_weights(const WeightMap& lam, double q);

// (Phi f)(u) = f(u) / lambda_u maps L^q(mu) isometrically onto L^q(lambda)
// and intertwines S* Phi = Phi B.
TreeFunction phi_map(const TreeFunction& f, const WeightMap& lam, const TreeModel& model);
TreeFunction phi_inverse(const TreeFunction& g, const WeightMap& lam, const TreeModel& model);

// || S*(Phi f) - Phi(B f) ||_{q,lambda}: the intertwining residual.
double check_unitary_equivalence(const TreeFunction& f, const WeightMap& lam, double q,
                                 const TreeModel& model);

}  // namespace treeshift
