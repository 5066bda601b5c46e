#pragma once

#include <cstdint>
#include <vector>

#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

enum class OperatorKind { Forward, Adjoint, Backward, RightInverse };

// Dense matrix of an operator compressed to a finite sub-window: entry (i, j)
// is (Op e_{v_j})(v_i) over the sub-window vertices in canonical order. The
// boundary flags record whether the compression discarded mass at either
// edge, i.e. whether the matrix is only a corner of the true operator.
struct TruncatedOperator {
  OperatorKind kind = OperatorKind::Forward;
  std::uint32_t power = 1;  // the n of T_n; 1 otherwise
  double p = 2.0;
  std::vector<VertexAddress> vertices;
  std::vector<double> weights;  // lambda per vertex, same order
  bool bottom_boundary = false;
  bool top_boundary = false;
  std::size_t dim = 0;
  std::vector<double> a;  // row-major, dim x dim

  double at(std::size_t i, std::size_t j) const { return a[i * dim + j]; }
};

// Materializes the compression. `sub` must fit inside the model window; the
// dimension is capped at 16000 vertices.
TruncatedOperator truncate_operator(OperatorKind kind, const TreeModel& model,
                                    const WeightMap& lam, DepthWindow sub, double p,
                                    std::uint32_t power = 1);

struct PowerIterationResult {
  double sigma = 0.0;  // largest-singular-value estimate, biased low
  int iterations = 0;
  bool converged = false;
  double last_delta = 0.0;
};

// Deterministic power iteration on the weighted Gram operator A*A with
// A* = D^{-1} A^T D, D = diag(lambda); valid for p == 2 only. The returned
// sigma is a Rayleigh quotient, hence never exceeds the true norm.
PowerIterationResult estimate_norm_p2(const TruncatedOperator& op, double tol = 1e-6,
                                      int max_iterations = 10000);

// Certified lower bound for the weighted p-norm: best point-mass column plus
// seeded random trial vectors.
double lower_bound_norm_p(const TruncatedOperator& op, int trials, std::uint64_t seed);

}  // namespace treeshift
