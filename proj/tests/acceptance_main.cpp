// Acceptance gate: ten checks, one [PASS]/[FAIL] line each with the measured
// values; the exit code is the number of failures.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "treeshift/dynamics.hpp"
#include "treeshift/function.hpp"
#include "treeshift/matrix_oracle.hpp"
#include "treeshift/numerics.hpp"
#include "treeshift/operators.hpp"
#include "treeshift/shadowing.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

using namespace treeshift;

namespace {

int failures = 0;

void report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", num, name, detail.c_str());
  if (!ok) ++failures;
}

template <typename Body>
void criterion(int num, const char* name, Body body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    detail = body(ok);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream line;
  line << detail << " [" << format_double(secs) << "s]";
  report(num, name, ok, line.str());
}

std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VertexAddress addr(const std::string& text) { return VertexAddress::parse(text); }

// seeded 200-vertex tree: parent of v_i drawn among v_0..v_{i-1}
TreeModel random_finite_tree(std::size_t n, std::uint64_t seed,
                             std::vector<std::string>* names_out) {
  std::uint64_t state = seed;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i)
    edges.emplace_back(names[splitmix(state) % i], names[i]);
  if (names_out) *names_out = names;
  return TreeModel::finite(edges, names[0]);
}

WeightMap random_table_weights(const TreeModel& model, std::uint64_t seed) {
  std::uint64_t state = seed;
  WeightMap::Table table;
  for (const auto& v : model.window_vertices())
    table[v] = 1.5 + unit_interval(splitmix(state));  // in [0.5, 2.5)
  return WeightMap::table(std::move(table));
}

}  // namespace

int main() {
  const double sqrt2 = std::sqrt(2.0);

  criterion(1, "shift-norm agreement (closed form vs depth-12 oracle)", [&](bool& ok) {
    const auto model = TreeModel::kary_rooted(2, {0, 12});
    const auto closed = shift_norm(WeightMap::unit(), 2.0, model);
    const auto op =
        truncate_operator(OperatorKind::Forward, model, WeightMap::unit(), {0, 12}, 2.0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto pi = estimate_norm_p2(op);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = closed.exact && closed.value == sqrt2 && pi.converged &&
         pi.sigma >= sqrt2 - 1e-3 && pi.sigma <= sqrt2 + 1e-12 && secs < 10.0;
    std::ostringstream d;
    d << "closed=" << format_double(closed.value) << " sigma=" << format_double(pi.sigma)
      << " dim=" << op.dim << " iterations=" << pi.iterations;
    return d.str();
  });

  criterion(2, "duality <Sf,g> = <f,S*g> on a random 200-vertex tree", [&](bool& ok) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = random_finite_tree(200, 12345, nullptr);
    const auto lam = random_table_weights(model, 777);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto f = random_tree_function(model, 200, 10, 2 * i + 1);
      const auto g = random_tree_function(model, 200, 10, 2 * i + 2);
      const auto lhs = dual_pairing(apply_S(f, model), g, lam, model);
      const auto rhs = dual_pairing(f, apply_Sstar(g, lam, model), lam, model);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = worst < 1e-12 && secs < 1.0;
    std::ostringstream d;
    d << "pairs=100 p=1.5 max|<Sf,g>-<f,S*g>|=" << format_double(worst);
    return d.str();
  });

  criterion(3, "unitary equivalence S* Phi = Phi B", [&](bool& ok) {
    const auto model = TreeModel::kary_rooted(2, {0, 8});
    const auto lam = random_table_weights(model, 4242);
    double worst = 0.0;
    for (double q : {1.5, 2.0, 3.0})
      for (int i = 0; i < 100; ++i)
        worst = std::max(worst, check_unitary_equivalence(
                                    random_tree_function(model, 6, 6, 900 + i), lam, q, model));
    ok = worst < 1e-12;
    std::ostringstream d;
    d << "q in {1.5,2,3}, 100 f each, max residual=" << format_double(worst);
    return d.str();
  });

  criterion(4, "right inverse: B^n (T_n g) = g exactly", [&](bool& ok) {
    const auto model = TreeModel::kary_rooted(2, {0, 16});
    double worst = 0.0;
    bool supports = true;
    for (int i = 0; i < 50; ++i) {
      const std::uint32_t n = 1 + static_cast<std::uint32_t>(i % 6);
      const auto g = random_tree_function(model, 8, 5, 400 + i);
      const auto h = apply_B_pow(apply_T_n(g, n, model), n, model);
      if (h.entries().size() != g.entries().size()) supports = false;
      for (const auto& [v, a] : g.entries()) {
        const auto it = h.entries().find(v);
        if (it == h.entries().end()) {
          supports = false;
          continue;
        }
        worst = std::max(worst, std::abs(it->second - a));
      }
    }
    ok = supports && worst < 1e-14;
    std::ostringstream d;
    d << "50 g, n in 1..6, support equal=" << (supports ? "yes" : "no")
      << " max value error=" << format_double(worst);
    return d.str();
  });

  criterion(5, "Omega identity ||T_n g||_q^q = sum |g|^q Omega", [&](bool& ok) {
    const auto model = TreeModel::kary_rooted(2, {0, 16});
    double worst = 0.0;
    for (const auto& lam : {WeightMap::unit(), WeightMap::geometric(0.7)})
      for (double q : {2.0, 3.0})
        for (int i = 0; i < 20; ++i) {
          const std::uint32_t n = 1 + static_cast<std::uint32_t>(i % 5);
          const auto g = random_tree_function(model, 6, 5, 600 + i);
          const double lhs = std::pow(norm_p(apply_T_n(g, n, model), lam, model, q), q);
          KahanSum rhs;
          for (const auto& [v, a] : g.entries())
            rhs.add(std::pow(std::abs(a), q) * omega(model, lam, q, v, n));
          worst = std::max(worst, std::abs(lhs - rhs.value()) / rhs.value());
        }
    ok = worst < 1e-12;
    std::ostringstream d;
    d << "unit+geometric(0.7), q in {2,3}, max rel error=" << format_double(worst);
    return d.str();
  });

  criterion(6, "iff characterization: no free end vs grafted free end", [&](bool& ok) {
    const auto full = TreeModel::kary_rooted(2, {0, 32});
    const auto v_full = decide_backward(full, WeightMap::unit(), 2.0);
    const auto grafted = TreeModel::grafted_free_end(2, addr("0"), {0, 32});
    const auto v_graft = decide_backward(grafted, WeightMap::unit(), 2.0);
    bool sums_one = v_graft.witness.has_value();
    if (v_graft.witness)
      for (std::uint32_t n = 1; n <= 30; ++n)
        sums_one = sums_one &&
                   necessary_sum(grafted, WeightMap::unit(), 2.0, *v_graft.witness, n) == 1.0;
    ok = v_full.outcome == HypercyclicityVerdict::Outcome::HC &&
         v_full.reason == HypercyclicityVerdict::Reason::NoFreeEndUnweighted &&
         !v_full.evidence_graded &&
         v_graft.outcome == HypercyclicityVerdict::Outcome::NotHC &&
         v_graft.reason == HypercyclicityVerdict::Reason::FreeEnd && sums_one;
    std::ostringstream d;
    d << "binary->" << (v_full.outcome == HypercyclicityVerdict::Outcome::HC ? "HC" : "other")
      << " grafted->"
      << (v_graft.reason == HypercyclicityVerdict::Reason::FreeEnd ? "NotHC/FreeEnd" : "other")
      << " necessary_sum==1 for n<=30: " << (sums_one ? "yes" : "no");
    return d.str();
  });

  criterion(7, "showcase decay rates Theta~(2/3)^n, Omega~(1/6)^n", [&](bool& ok) {
    const auto model = TreeModel::kary_unrooted(2, {16, 16});
    const auto ex = example_weights_rary(2, 3.0, 2.0, VertexAddress::anchor());
    const VertexAddress probes[] = {addr("anchor"), addr("0"), addr("0.0")};
    double worst = 0.0;
    for (int d = 0; d <= 2; ++d) {
      double tmin = 1e300, tmax = 0.0, omin = 1e300, omax = 0.0;
      for (std::uint32_t n = d + 1; n <= static_cast<std::uint32_t>(d) + 10; ++n) {
        const double t = theta(model, ex.lam, 2.0, probes[d], n) * std::pow(1.5, n);
        const double o = omega(model, ex.lam, 2.0, probes[d], n) * std::pow(6.0, n);
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
        omin = std::min(omin, o);
        omax = std::max(omax, o);
      }
      worst = std::max({worst, (tmax - tmin) / tmax, (omax - omin) / omax});
    }
    const auto verdict = decide_backward(model, ex.lam, 2.0);
    ok = worst < 1e-9 && verdict.outcome == HypercyclicityVerdict::Outcome::HC &&
         verdict.reason == HypercyclicityVerdict::Reason::SufficientConditionMet;
    std::ostringstream d;
    d << "max constancy deviation=" << format_double(worst) << " verdict="
      << (verdict.outcome == HypercyclicityVerdict::Outcome::HC ? "HC" : "other");
    return d.str();
  });

  criterion(8, "orbit shadowing at eps 1e-3 then 1e-6", [&](bool& ok) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = TreeModel::kary_rooted(2, {0, 160});
    std::vector<TreeFunction> targets;
    for (int i = 0; i < 4; ++i) targets.push_back(random_tree_function(model, 3, 3, 31 + i));
    const auto run = [&](double eps) {
      const auto plan = plan_schedule(model, WeightMap::unit(), 2.0, eps, targets);
      return build_shadow_vector(plan, model, WeightMap::unit()).errors;
    };
    const auto e1 = run(1e-3);
    const auto e2 = run(1e-6);
    double worst1 = 0.0, worst2 = 0.0;
    bool no_increase = e1.size() == 4 && e2.size() == 4;
    for (std::size_t k = 0; k < e1.size() && no_increase; ++k) {
      worst1 = std::max(worst1, e1[k]);
      worst2 = std::max(worst2, e2[k]);
      no_increase = e2[k] <= e1[k] + 1e-15;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = no_increase && worst1 < 1e-3 && worst2 < 1e-6 && secs < 30.0;
    std::ostringstream d;
    d << "max error eps=1e-3: " << format_double(worst1)
      << ", eps=1e-6: " << format_double(worst2)
      << ", per-stage increase: " << (no_increase ? "none" : "yes");
    return d.str();
  });

  criterion(9, "L^1 contraction of B under unit weights", [&](bool& ok) {
    const auto model = TreeModel::kary_rooted(2, {0, 8});
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const auto f = random_tree_function(model, 6, 5, 100 + i);
      const double denom = norm_p(f, WeightMap::unit(), model, 1.0);
      worst = std::max(worst, norm_p(apply_B(f, model), WeightMap::unit(), model, 1.0) / denom);
    }
    const auto point = TreeFunction::point_mass(addr("0.1"));
    const double witness =
        norm_p(apply_B(point, model), WeightMap::unit(), model, 1.0) /
        norm_p(point, WeightMap::unit(), model, 1.0);
    ok = worst <= 1.0 + 1e-12 && witness >= 1.0 - 1e-12;
    std::ostringstream d;
    d << "200 f, max ratio=" << format_double(worst)
      << ", point-mass ratio=" << format_double(witness);
    return d.str();
  });

  criterion(10, "forward deciders across the shape classes", [&](bool& ok) {
    using O = HypercyclicityVerdict::Outcome;
    using R = HypercyclicityVerdict::Reason;
    const auto rooted = decide_forward(TreeModel::kary_rooted(3, {0, 6}));
    const auto grafted = decide_forward(TreeModel::grafted_free_end(2, addr("0"), {0, 8}));
    const auto branching = decide_forward(TreeModel::kary_unrooted(2, {4, 4}));
    const auto bilateral = decide_forward(TreeModel::bilateral_line({6, 6}));
    const auto leafline = decide_forward(TreeModel::unilateral_leaf_line({6, 0}));
    ok = rooted.outcome == O::NotHC && rooted.reason == R::Rooted &&
         grafted.outcome == O::NotHC && grafted.reason == R::Rooted &&
         branching.outcome == O::NotHC && branching.reason == R::Branching &&
         branching.witness.has_value() && bilateral.outcome == O::ReducesToSalas &&
         bilateral.reason == R::BilateralLine && leafline.outcome == O::ReducesToSalas &&
         leafline.reason == R::UnilateralLeafLine;
    std::ostringstream d;
    d << "rooted/grafted->NotHC(Rooted) branching->NotHC(Branching,witness="
      << (branching.witness.has_value() ? "yes" : "no")
      << ") lines->ReducesToSalas";
    return d.str();
  });

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
