#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treeshift/function.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace treeshift {

// sum_{v in child^n(u)} lambda_v^alpha, collapsed to a closed form on
// uniform subtrees with level-determined weights, enumerated otherwise.
double weight_power_sum(const TreeModel& model, const WeightMap& lam, const VertexAddress& u,
                        std::uint32_t n, double alpha);

// Omega(u, n) = gamma(u,n)^{-q} sum_{child^n(u)} lambda_v — the q-th power of
// ||T_n|| localized at u; its decay along a subsequence drives hypercyclicity.
double omega(const TreeModel& model, const WeightMap& lam, double q, const VertexAddress& u,
             std::uint32_t n);

// Theta(u, n) = gamma(parent^n(u), n)^{q-1} lambda_{parent^n(u)} — controls
// ||B^n|| against point masses on unrooted trees.
double theta(const TreeModel& model, const WeightMap& lam, double q, const VertexAddress& u,
             std::uint32_t n);

// Omega*(u, n) = gamma(u,n)^{-q} sum_{child^n(u)} lambda_v^{1-q} — the
// forward-adjoint analogue of Omega under the companion weights.
double omega_star(const TreeModel& model, const WeightMap& lam, double q, const VertexAddress& u,
                  std::uint32_t n);

// sum_{child^n(u)} lambda_v^{-1/q}; staying bounded along a free-end tail
// contradicts hypercyclicity.
double necessary_sum(const TreeModel& model, const WeightMap& lam, double q,
                     const VertexAddress& u, std::uint32_t n);

enum class DecayQuantity { Omega, Theta, OmegaStar, NecessarySum };
enum class DecayVerdict { DecaysToZero, DivergesToInfinity, Inconclusive };

struct DecaySeries {
  VertexAddress vertex;
  std::vector<double> values;  // aligned with the grid actually used
  double fitted_ratio = 1.0;   // exp of the log-linear slope over the tail
  DecayVerdict verdict = DecayVerdict::Inconclusive;
};

struct DecayReport {
  DecayQuantity quantity = DecayQuantity::Omega;
  double q = 2.0;
  std::vector<std::uint32_t> grid;
  std::vector<DecaySeries> series;
  DecayVerdict verdict = DecayVerdict::Inconclusive;
  bool used_subsequence = false;
  std::vector<std::uint32_t> subsequence;  // grid points the verdict relies on
  std::string note;
};

// Verdict for one value series: a strictly monotone tail of at least three
// grid points with a certified geometric ratio, in either direction;
// everything else is inconclusive.
DecayVerdict classify_series(const std::vector<std::uint32_t>& grid,
                             const std::vector<double>& values, double* fitted_ratio);

// Greedy strictly-decreasing subsequence of the pointwise maxima, starting at
// the global maximum; empty when fewer than three points survive.
std::vector<std::size_t> choose_decreasing_subsequence(const std::vector<std::vector<double>>& rows);

DecayReport decay_report(const TreeModel& model, const WeightMap& lam, double q,
                         DecayQuantity quantity, const std::vector<VertexAddress>& probes,
                         const std::vector<std::uint32_t>& grid);

// Ball of radius 4 around the root/anchor (clipped), capped at 64 probes.
std::vector<VertexAddress> default_probes(const TreeModel& model);

struct HypercyclicityVerdict {
  enum class Outcome { NotHC, HC, ReducesToSalas, EvidenceOnly };
  enum class Reason {
    Rooted,
    Branching,
    Leaf,
    FreeEnd,
    NecessaryFails,
    NoFreeEndUnweighted,
    SufficientConditionMet,
    BilateralLine,
    UnilateralLeafLine,
    Inconclusive,
  };
  Outcome outcome = Outcome::EvidenceOnly;
  Reason reason = Reason::Inconclusive;
  std::optional<VertexAddress> witness;
  std::string statement;        // the result invoked, in words
  bool evidence_graded = false; // true when numerics on probes, not a theorem, decided
  std::vector<DecayReport> reports;
  std::string note;
};

// Forward shift S: structure alone decides (or defers to the classical
// weighted-shift theory on lines).
HypercyclicityVerdict decide_forward(const TreeModel& model);

// Backward shift B on L^q(lambda).
HypercyclicityVerdict decide_backward(const TreeModel& model, const WeightMap& lam, double q,
                                      const std::vector<VertexAddress>& probes = {},
                                      std::uint32_t n_max = 12);

// The r-ary unrooted showcase weights lambda_v = s^{-dist(v,H)} with H the
// anchor's generation; requires r >= 2, q > 1, s > r^{q-1}.
struct RaryExample {
  WeightMap lam;
  double theta_ratio;  // r^{q-1}/s, the geometric rate of Theta
  double omega_ratio;  // 1/(r^{q-1} s), the geometric rate of Omega
};
RaryExample example_weights_rary(std::uint32_t r, double s, double q, const VertexAddress& anchor);

}  // namespace treeshift
