#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "treeshift/dynamics.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

using namespace treeshift;

namespace {

VertexAddress addr(const std::string& text) { return VertexAddress::parse(text); }

// Enumerating oracle for sum_{child^n(u)} lambda_v^alpha.
double brute_power_sum(const TreeModel& model, const WeightMap& lam, const VertexAddress& u,
                       std::uint32_t n, double alpha) {
  KahanSum s;
  for (const auto& v : model.children_n(u, n)) s.add(std::pow(lam.at(model, v), alpha));
  return s.value();
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("weight_power_sum closed forms match enumeration") {
  const auto rooted = TreeModel::kary_rooted(3, {0, 6});
  const auto unrooted = TreeModel::kary_unrooted(2, {5, 5});
  const auto geo = WeightMap::geometric(0.7);
  const auto dist = WeightMap::distance_to_h(3.0, addr("anchor"));
  for (double alpha : {1.0, -0.5, 2.0}) {
    for (std::uint32_t n : {1u, 2u, 3u}) {
      for (const auto& u : {addr("root"), addr("0"), addr("1.2")}) {
        CHECK(weight_power_sum(rooted, geo, u, n, alpha) ==
              doctest::Approx(brute_power_sum(rooted, geo, u, n, alpha)).epsilon(1e-12));
      }
      for (const auto& u : {addr("anchor"), addr("^2"), addr("0.1")}) {
        CHECK(weight_power_sum(unrooted, dist, u, n, alpha) ==
              doctest::Approx(brute_power_sum(unrooted, dist, u, n, alpha)).epsilon(1e-12));
      }
    }
  }

  // non-uniform table weights force enumeration
  const auto fin = TreeModel::finite({{"r", "a"}, {"r", "b"}, {"a", "c"}, {"a", "d"}}, "r");
  WeightMap::Table t;
  t[addr("root")] = 1.0;
  t[addr("0")] = 2.0;
  t[addr("1")] = 5.0;
  t[addr("0.0")] = 4.0;
  t[addr("0.1")] = 9.0;
  const auto lam = WeightMap::table(t);
  CHECK(weight_power_sum(fin, lam, addr("root"), 1, 1.0) == doctest::Approx(7.0));
  CHECK(weight_power_sum(fin, lam, addr("root"), 2, 0.5) == doctest::Approx(5.0));
  CHECK(weight_power_sum(fin, lam, addr("root"), 3, 1.0) == 0.0);

  // table weights on a family cannot see past the window
  WeightMap::Table ft;
  ft[addr("root")] = 1.0;
  const auto shallow = TreeModel::kary_rooted(2, {0, 2});
  CHECK_THROWS_AS(
      (void)weight_power_sum(shallow, WeightMap::table(ft), addr("root"), 3, 1.0),
      WindowExhausted);
}

TEST_CASE("omega / theta / omega_star / necessary_sum: frozen closed values") {
  const auto bin = TreeModel::kary_rooted(2, {0, 24});
  const auto unit = WeightMap::unit();
  // Omega(u,n) = 2^{-2n} * 2^n = 2^{-n}, exactly representable
  for (std::uint32_t n : {1u, 3u, 10u}) {
    CHECK(omega(bin, unit, 2.0, addr("root"), n) == std::ldexp(1.0, -static_cast<int>(n)));
    CHECK(omega(bin, unit, 2.0, addr("0.1"), n) == std::ldexp(1.0, -static_cast<int>(n)));
  }
  // Theta on the unrooted binary with unit weights: gamma^{q-1} = 2^n
  const auto ubin = TreeModel::kary_unrooted(2, {20, 20});
  CHECK(theta(ubin, unit, 2.0, addr("anchor"), 5) == 32.0);
  // Omega* with unit weights coincides with Omega
  CHECK(omega_star(bin, unit, 2.0, addr("root"), 4) == omega(bin, unit, 2.0, addr("root"), 4));
  // necessary_sum with unit weights counts descendants
  CHECK(necessary_sum(bin, unit, 2.0, addr("root"), 6) == 64.0);

  // geometric weights, q = 3: Omega(u,n) = 2^{-3n} * 2^n (1/2)^{l+n}
  const auto geo = WeightMap::geometric(0.5);
  const double want = std::pow(2.0, -3.0 * 4) * std::pow(2.0, 4.0) * std::pow(0.5, 1 + 4);
  CHECK(omega(bin, geo, 3.0, addr("0"), 4) == doctest::Approx(want).epsilon(1e-12));

  // Theta needs n ancestors: a rooted tree simply runs out (a fact), while an
  // unrooted window runs dry (an observation limit)
  CHECK_THROWS_AS((void)theta(bin, unit, 2.0, addr("0.1"), 3), DomainError);
  CHECK_THROWS_AS((void)theta(ubin, unit, 2.0, addr("anchor"), 21), WindowExhausted);
  CHECK(theta(bin, unit, 2.0, addr("0.1"), 2) == 4.0);  // parent^2 = root, gamma(root,2)=4
}

TEST_CASE("showcase r-ary weights: admissibility and exact geometric rates") {
  const auto model = TreeModel::kary_unrooted(2, {14, 14});
  const auto ex = example_weights_rary(2, 3.0, 2.0, addr("anchor"));
  CHECK(ex.theta_ratio == doctest::Approx(2.0 / 3.0));
  CHECK(ex.omega_ratio == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS((void)example_weights_rary(2, 2.0, 2.0, addr("anchor")), DomainError);
  CHECK_THROWS_AS((void)example_weights_rary(1, 3.0, 2.0, addr("anchor")), DomainError);
  CHECK_THROWS_AS((void)example_weights_rary(2, 3.0, 1.0, addr("anchor")), DomainError);

  // Theta(u,n) * (s/r^{q-1})^n and Omega(u,n) * (r^{q-1} s)^n are constant in
  // n once n clears the probe's level
  for (const auto& u : {addr("anchor"), addr("0"), addr("^1"), addr("0.1"), addr("^2")}) {
    const auto d = static_cast<std::uint32_t>(std::abs(u.level()));
    double c_theta = 0.0, c_omega = 0.0;
    for (std::uint32_t n = d + 1; n <= d + 8; ++n) {
      const double th = theta(model, ex.lam, 2.0, u, n) * std::pow(3.0 / 2.0, n);
      const double om = omega(model, ex.lam, 2.0, u, n) * std::pow(6.0, n);
      if (n == d + 1) {
        c_theta = th;
        c_omega = om;
      } else {
        CHECK(th == doctest::Approx(c_theta).epsilon(1e-9));
        CHECK(om == doctest::Approx(c_omega).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("classify_series: certified geometric tails only") {
  const std::vector<std::uint32_t> grid = {1, 2, 3, 4, 5, 6, 7, 8};
  double ratio = 0.0;
  std::vector<double> dec, inc, flat, wobble;
  for (std::uint32_t n : grid) {
    dec.push_back(std::pow(0.5, n));
    inc.push_back(std::pow(1.5, n));
    flat.push_back(2.0);
    wobble.push_back(n % 2 ? 1.0 : 0.25);
  }
  CHECK(classify_series(grid, dec, &ratio) == DecayVerdict::DecaysToZero);
  CHECK(ratio == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(classify_series(grid, inc, &ratio) == DecayVerdict::DivergesToInfinity);
  CHECK(ratio == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(classify_series(grid, flat, &ratio) == DecayVerdict::Inconclusive);
  CHECK(classify_series(grid, wobble, &ratio) == DecayVerdict::Inconclusive);
  // eventual monotonicity suffices: a transient head is forgiven
  std::vector<double> burnin = dec;
  burnin[0] = 1e-9;
  CHECK(classify_series(grid, burnin, &ratio) == DecayVerdict::DecaysToZero);
  // a lone final step is not a trend
  std::vector<double> step = {2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 1.0};
  CHECK(classify_series(grid, step, &ratio) == DecayVerdict::Inconclusive);

  // subsequence extraction walks the running maxima downward
  const std::vector<std::vector<double>> rows = {
      {1.0, 4.0, 2.0, 1.0, 0.5, 0.25},
      {2.0, 1.0, 3.0, 0.5, 0.4, 0.2},
  };
  const auto picks = choose_decreasing_subsequence(rows);
  REQUIRE(picks.size() >= 3);
  for (std::size_t i = 1; i < picks.size(); ++i) {
    CHECK(picks[i - 1] < picks[i]);
    const double prev = std::max(rows[0][picks[i - 1]], rows[1][picks[i - 1]]);
    const double cur = std::max(rows[0][picks[i]], rows[1][picks[i]]);
    CHECK(cur < prev);
  }
  CHECK(picks.front() == 1);  // global maximum of the pointwise maxima
}

TEST_CASE("decay_report: binary unit Omega decays on every probe") {
  const auto bin = TreeModel::kary_rooted(2, {0, 30});
  const std::vector<std::uint32_t> grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto rep = decay_report(bin, WeightMap::unit(), 2.0, DecayQuantity::Omega,
                                {addr("root"), addr("0"), addr("1.1")}, grid);
  CHECK(rep.verdict == DecayVerdict::DecaysToZero);
  CHECK_FALSE(rep.used_subsequence);
  REQUIRE(rep.series.size() == 3);
  for (const auto& s : rep.series) {
    CHECK(s.verdict == DecayVerdict::DecaysToZero);
    CHECK(s.fitted_ratio == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(s.values.size() == grid.size());
    CHECK(s.values[2] == 0.125);
  }
}

TEST_CASE("decide_forward: structure decides") {
  const auto r = decide_forward(TreeModel::kary_rooted(2, {0, 8}));
  CHECK(r.outcome == HypercyclicityVerdict::Outcome::NotHC);
  CHECK(r.reason == HypercyclicityVerdict::Reason::Rooted);
  CHECK_FALSE(r.evidence_graded);

  const auto b = decide_forward(TreeModel::kary_unrooted(2, {5, 5}));
  CHECK(b.outcome == HypercyclicityVerdict::Outcome::NotHC);
  CHECK(b.reason == HypercyclicityVerdict::Reason::Branching);
  REQUIRE(b.witness.has_value());
  CHECK(TreeModel::kary_unrooted(2, {5, 5}).outdegree(*b.witness) == 2);

  const auto line = decide_forward(TreeModel::bilateral_line({5, 5}));
  CHECK(line.outcome == HypercyclicityVerdict::Outcome::ReducesToSalas);
  CHECK(line.reason == HypercyclicityVerdict::Reason::BilateralLine);

  const auto leaf = decide_forward(TreeModel::unilateral_leaf_line({5, 0}));
  CHECK(leaf.outcome == HypercyclicityVerdict::Outcome::ReducesToSalas);
  CHECK(leaf.reason == HypercyclicityVerdict::Reason::UnilateralLeafLine);

  // opaque branching still certifies NotHC: the witness was observed
  const auto ob = decide_forward(TreeModel::kary_unrooted(3, {4, 4}, true));
  CHECK(ob.outcome == HypercyclicityVerdict::Outcome::NotHC);
  CHECK(ob.reason == HypercyclicityVerdict::Reason::Branching);

  // an opaque line can only report evidence
  const auto ol = decide_forward(TreeModel::bilateral_line({5, 5}, true));
  CHECK(ol.outcome == HypercyclicityVerdict::Outcome::EvidenceOnly);
}

TEST_CASE("decide_backward: frozen verdicts across the regimes") {
  // rooted leafless unweighted, q > 1, no free end: hypercyclic iff no free end
  const auto bin = TreeModel::kary_rooted(2, {0, 16});
  const auto hc = decide_backward(bin, WeightMap::unit(), 2.0);
  CHECK(hc.outcome == HypercyclicityVerdict::Outcome::HC);
  CHECK(hc.reason == HypercyclicityVerdict::Reason::NoFreeEndUnweighted);
  CHECK_FALSE(hc.evidence_graded);

  // free end: certified NotHC with the grafted ray as witness
  const auto grafted = TreeModel::grafted_free_end(2, addr("0"), {0, 32});
  const auto fe = decide_backward(grafted, WeightMap::unit(), 2.0);
  CHECK(fe.outcome == HypercyclicityVerdict::Outcome::NotHC);
  CHECK(fe.reason == HypercyclicityVerdict::Reason::FreeEnd);
  REQUIRE(fe.witness.has_value());

  // the free-end necessary sum stays pinned at 1 along the ray
  for (std::uint32_t n = 1; n <= 30; ++n)
    CHECK(necessary_sum(grafted, WeightMap::unit(), 2.0, *fe.witness, n) == 1.0);

  // leaf kills hypercyclicity outright
  const auto leaf = decide_backward(TreeModel::unilateral_leaf_line({6, 0}), WeightMap::unit(), 2.0);
  CHECK(leaf.outcome == HypercyclicityVerdict::Outcome::NotHC);
  CHECK(leaf.reason == HypercyclicityVerdict::Reason::Leaf);

  // unrooted showcase: numerics certify the sufficient condition
  const auto model = TreeModel::kary_unrooted(2, {16, 16});
  const auto ex = example_weights_rary(2, 3.0, 2.0, addr("anchor"));
  const auto sc = decide_backward(model, ex.lam, 2.0);
  CHECK(sc.outcome == HypercyclicityVerdict::Outcome::HC);
  CHECK(sc.reason == HypercyclicityVerdict::Reason::SufficientConditionMet);
  CHECK(sc.evidence_graded);
  CHECK_FALSE(sc.reports.empty());

  // q = 1 on the unweighted binary: B is a contraction, only evidence
  const auto q1 = decide_backward(bin, WeightMap::unit(), 1.0);
  CHECK(q1.outcome == HypercyclicityVerdict::Outcome::EvidenceOnly);

  // a weighted counterexample to decay: growing geometric weights upward
  const auto heavy = decide_backward(TreeModel::kary_rooted(1, {0, 16}), WeightMap::geometric(2.0), 2.0);
  CHECK(heavy.outcome == HypercyclicityVerdict::Outcome::NotHC);
  CHECK(heavy.reason == HypercyclicityVerdict::Reason::NecessaryFails);

  // opaque models may not invoke the structural theorems as certain
  const auto ohc = decide_backward(TreeModel::kary_rooted(2, {0, 16}, true), WeightMap::unit(), 2.0);
  CHECK(ohc.outcome == HypercyclicityVerdict::Outcome::HC);
  CHECK(ohc.reason == HypercyclicityVerdict::Reason::SufficientConditionMet);
  CHECK(ohc.evidence_graded);
}

TEST_CASE("default_probes stay inside the window") {
  const auto probes = default_probes(TreeModel::kary_unrooted(2, {3, 3}));
  CHECK(!probes.empty());
  CHECK(probes.size() <= 64);
  const auto model = TreeModel::kary_unrooted(2, {3, 3});
  for (const auto& v : probes) CHECK(model.in_window(v));
}

}  // TEST_SUITE
