#include "treeshift/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"

namespace treeshift {

namespace {

void check_q(double q) {
  if (!(q >= 1.0) || !std::isfinite(q))
    throw DomainError("exponent q must lie in [1, infinity)");
}

double wps_rec(const TreeModel& model, const WeightMap& lam, const VertexAddress& u,
               std::uint32_t n, double alpha) {
  if (n == 0) return std::pow(lam.at(model, u), alpha);
  if (model.uniform_below(u) && lam.depth_uniform(model)) {
    double g = model.gamma(u, n);
    if (g == 0.0) return 0.0;
    return g * std::pow(lam.value_at_level(u.level() + static_cast<int>(n)), alpha);
  }
  KahanSum s;
  for (const auto& c : model.children(u)) s.add(wps_rec(model, lam, c, n - 1, alpha));
  return s.value();
}

// Leaves strictly above depth n below u void the depth-n quantities.
void check_leafless_below(const TreeModel& model, const VertexAddress& u, std::uint32_t n) {
  if (model.leafless()) return;
  if (!model.is_finite()) {
    // unilateral leaf line: the leaf sits u.hops steps below u
    if (n > u.hops)
      throw DomainError("leaf '" + model.format(VertexAddress::anchor()) + "' lies " +
                        std::to_string(u.hops) + " steps below '" + model.format(u) +
                        "', inside depth " + std::to_string(n));
    return;
  }
  std::vector<VertexAddress> frontier{u};
  for (std::uint32_t step = 0; step < n; ++step) {
    std::vector<VertexAddress> next;
    for (const auto& v : frontier) {
      auto kids = model.children(v);
      if (kids.empty())
        throw DomainError("leaf '" + model.format(v) + "' at depth " + std::to_string(step) +
                          " below '" + model.format(u) + "', inside depth " + std::to_string(n));
      next.insert(next.end(), kids.begin(), kids.end());
    }
    frontier = std::move(next);
  }
}

}  // namespace

double weight_power_sum(const TreeModel& model, const WeightMap& lam, const VertexAddress& u,
                        std::uint32_t n, double alpha) {
  if (!model.is_finite() && !lam.depth_uniform(model) &&
      model.gamma(u, n) > static_cast<double>(window_limit()))
    throw WindowExhausted("weight sum over child^" + std::to_string(n) +
                          " exceeds TREESHIFT_WINDOW_LIMIT");
  return wps_rec(model, lam, u, n, alpha);
}

double omega(const TreeModel& model, const WeightMap& lam, double q, const VertexAddress& u,
             std::uint32_t n) {
  check_q(q);
  check_leafless_below(model, u, n);
  double g = model.gamma(u, n);
  return weight_power_sum(model, lam, u, n, 1.0) / std::pow(g, q);
}

double theta(const TreeModel& model, const WeightMap& lam, double q, const VertexAddress& u,
             std::uint32_t n) {
  check_q(q);
  auto w = model.parent_n(u, n);
  if (!w)
    throw DomainError("theta: '" + model.format(u) + "' has no ancestor at distance " +
                      std::to_string(n));
  return std::pow(model.gamma(*w, n), q - 1.0) * lam.at(model, *w);
}

double omega_star(const TreeModel& model, const WeightMap& lam, double q, const VertexAddress& u,
                  std::uint32_t n) {
  check_q(q);
  check_leafless_below(model, u, n);
  double g = model.gamma(u, n);
  return weight_power_sum(model, lam, u, n, 1.0 - q) / std::pow(g, q);
}

double necessary_sum(const TreeModel& model, const WeightMap& lam, double q,
                     const VertexAddress& u, std::uint32_t n) {
  check_q(q);
  return weight_power_sum(model, lam, u, n, -1.0 / q);
}

namespace {

// Geometric ratio over [i0, L) by least squares on the logs; exact zeros in
// the tail mean the series already collapsed.
double fit_ratio(const std::vector<std::uint32_t>& grid, const std::vector<double>& values,
                 std::size_t i0) {
  for (std::size_t i = i0; i < values.size(); ++i)
    if (!(values[i] > 0.0)) return 0.0;
  double mx = 0, my = 0;
  std::size_t m = values.size() - i0;
  for (std::size_t i = i0; i < values.size(); ++i) {
    mx += grid[i];
    my += std::log(values[i]);
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = i0; i < values.size(); ++i) {
    double dx = grid[i] - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(values[i]) - my);
  }
  if (sxx == 0.0) return 1.0;
  return std::exp(sxy / sxx);
}

}  // namespace

DecayVerdict classify_series(const std::vector<std::uint32_t>& grid,
                             const std::vector<double>& values, double* fitted_ratio) {
  double ratio = 1.0;
  DecayVerdict verdict = DecayVerdict::Inconclusive;
  const std::size_t L = values.size();
  if (L >= 3) {
    // strictly monotone tails; three points minimum, otherwise a single final
    // step would pass for a trend
    std::size_t i_dec = L - 1;
    while (i_dec > 0 && values[i_dec - 1] > values[i_dec]) --i_dec;
    std::size_t i_inc = L - 1;
    while (i_inc > 0 && values[i_inc - 1] < values[i_inc]) --i_inc;
    if (i_dec + 2 < L && values[L - 1] < values[i_dec]) {
      ratio = fit_ratio(grid, values, i_dec);
      if (ratio < 1.0 - 1e-6) verdict = DecayVerdict::DecaysToZero;
    } else if (i_inc + 2 < L && values[L - 1] > values[i_inc]) {
      ratio = fit_ratio(grid, values, i_inc);
      if (ratio > 1.0 + 1e-6) verdict = DecayVerdict::DivergesToInfinity;
    }
  }
  if (fitted_ratio) *fitted_ratio = ratio;
  return verdict;
}

std::vector<std::size_t> choose_decreasing_subsequence(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows[0].empty()) return {};
  const std::size_t L = rows[0].size();
  std::vector<double> m(L, 0.0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < L; ++i) m[i] = std::max(m[i], r[i]);
  std::size_t start = static_cast<std::size_t>(
      std::max_element(m.begin(), m.end()) - m.begin());
  std::vector<std::size_t> idx{start};
  double cur = m[start];
  for (std::size_t i = start + 1; i < L; ++i)
    if (m[i] < cur * (1.0 - 1e-6)) {
      idx.push_back(i);
      cur = m[i];
    }
  if (idx.size() < 3) return {};
  return idx;
}

namespace {

double eval_quantity(const TreeModel& model, const WeightMap& lam, double q, DecayQuantity what,
                     const VertexAddress& u, std::uint32_t n) {
  switch (what) {
    case DecayQuantity::Omega:
      return omega(model, lam, q, u, n);
    case DecayQuantity::Theta:
      return theta(model, lam, q, u, n);
    case DecayQuantity::OmegaStar:
      return omega_star(model, lam, q, u, n);
    case DecayQuantity::NecessarySum:
      return necessary_sum(model, lam, q, u, n);
  }
  return 0.0;
}

const char* quantity_name(DecayQuantity q) {
  switch (q) {
    case DecayQuantity::Omega:
      return "omega";
    case DecayQuantity::Theta:
      return "theta";
    case DecayQuantity::OmegaStar:
      return "omega_star";
    case DecayQuantity::NecessarySum:
      return "necessary_sum";
  }
  return "?";
}

}  // namespace

DecayReport decay_report(const TreeModel& model, const WeightMap& lam, double q,
                         DecayQuantity quantity, const std::vector<VertexAddress>& probes,
                         const std::vector<std::uint32_t>& grid) {
  check_q(q);
  if (probes.empty()) throw InputError("decay report needs at least one probe vertex");
  if (grid.size() < 2) throw InputError("decay report needs at least two grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw InputError("decay grid must be strictly increasing");

  DecayReport rep;
  rep.quantity = quantity;
  rep.q = q;
  rep.grid = grid;
  rep.subsequence = grid;

  std::vector<std::vector<double>> rows;
  for (const auto& u : probes) {
    DecaySeries s;
    s.vertex = u;
    for (std::uint32_t n : grid) s.values.push_back(eval_quantity(model, lam, q, quantity, u, n));
    s.verdict = classify_series(grid, s.values, &s.fitted_ratio);
    rows.push_back(s.values);
    rep.series.push_back(std::move(s));
  }

  auto overall = [&]() {
    bool all_dec = true, all_div = true;
    for (const auto& s : rep.series) {
      all_dec = all_dec && s.verdict == DecayVerdict::DecaysToZero;
      all_div = all_div && s.verdict == DecayVerdict::DivergesToInfinity;
    }
    if (all_dec) return DecayVerdict::DecaysToZero;
    if (all_div) return DecayVerdict::DivergesToInfinity;
    return DecayVerdict::Inconclusive;
  };
  rep.verdict = overall();

  if (rep.verdict != DecayVerdict::DecaysToZero) {
    auto idx = choose_decreasing_subsequence(rows);
    if (!idx.empty()) {
      std::vector<std::uint32_t> sub_grid;
      for (std::size_t i : idx) sub_grid.push_back(grid[i]);
      bool all_dec = true;
      std::vector<std::pair<double, DecayVerdict>> redone;
      for (const auto& s : rep.series) {
        std::vector<double> sub_vals;
        for (std::size_t i : idx) sub_vals.push_back(s.values[i]);
        double r = 1.0;
        DecayVerdict v = classify_series(sub_grid, sub_vals, &r);
        redone.emplace_back(r, v);
        all_dec = all_dec && v == DecayVerdict::DecaysToZero;
      }
      if (all_dec) {
        for (std::size_t j = 0; j < rep.series.size(); ++j) {
          rep.series[j].fitted_ratio = redone[j].first;
          rep.series[j].verdict = redone[j].second;
        }
        rep.verdict = DecayVerdict::DecaysToZero;
        rep.used_subsequence = true;
        rep.subsequence = sub_grid;
      }
    }
  }

  double worst = 0.0;
  for (const auto& s : rep.series) worst = std::max(worst, s.fitted_ratio);
  if (rep.verdict == DecayVerdict::DecaysToZero) {
    rep.note = std::string(quantity_name(quantity)) + " decays on all probes" +
               (rep.used_subsequence ? " along the reported subsequence" : " on the full grid") +
               "; worst fitted ratio " + format_double(worst);
  } else {
    const DecaySeries* stuck = nullptr;
    for (const auto& s : rep.series)
      if (s.verdict != DecayVerdict::DecaysToZero) {
        stuck = &s;
        break;
      }
    rep.note = std::string(quantity_name(quantity)) +
               (rep.verdict == DecayVerdict::DivergesToInfinity ? " diverges" : " is inconclusive") +
               (stuck ? " (first non-decaying probe '" + model.format(stuck->vertex) + "')" : "");
  }
  return rep;
}

std::vector<VertexAddress> default_probes(const TreeModel& model) {
  auto ball = model.vertices_to_depth(4);
  if (ball.size() > 64) ball.resize(64);
  return ball;
}

HypercyclicityVerdict decide_forward(const TreeModel& model) {
  using Outcome = HypercyclicityVerdict::Outcome;
  using Reason = HypercyclicityVerdict::Reason;
  HypercyclicityVerdict out;
  switch (model.classify_shape()) {
    case ShapeClass::Rooted:
      out.outcome = Outcome::NotHC;
      out.reason = Reason::Rooted;
      out.statement =
          "on a rooted tree every power of the forward shift vanishes at the root, "
          "so no orbit is dense";
      break;
    case ShapeClass::HasBranchVertex:
      out.outcome = Outcome::NotHC;
      out.reason = Reason::Branching;
      out.witness = model.branch_witness();
      out.statement =
          "a vertex with two children forces the sibling coordinates of S^n f to agree "
          "for every n, so orbits cannot approximate functions separating the siblings";
      break;
    case ShapeClass::BilateralLine:
      out.outcome = Outcome::ReducesToSalas;
      out.reason = Reason::BilateralLine;
      out.statement =
          "the tree is the two-sided line, S is a bilateral weighted shift, and the "
          "classical bilateral hypercyclicity criterion characterizes it (not decided here)";
      break;
    case ShapeClass::UnilateralLeafLine:
      out.outcome = Outcome::ReducesToSalas;
      out.reason = Reason::UnilateralLeafLine;
      out.statement =
          "the tree is the one-sided line, S is a unilateral weighted shift, and the "
          "classical unilateral hypercyclicity criterion characterizes it (not decided here)";
      break;
    case ShapeClass::OtherUnrooted:
      out.outcome = Outcome::EvidenceOnly;
      out.reason = Reason::Inconclusive;
      out.statement =
          "no branch vertex observed in the window and line shape cannot be certified "
          "from the available metadata";
      break;
  }
  return out;
}

HypercyclicityVerdict decide_backward(const TreeModel& model, const WeightMap& lam, double q,
                                      const std::vector<VertexAddress>& probes,
                                      std::uint32_t n_max) {
  using Outcome = HypercyclicityVerdict::Outcome;
  using Reason = HypercyclicityVerdict::Reason;
  check_q(q);
  if (n_max < 2) throw InputError("decide_backward needs n_max >= 2");
  HypercyclicityVerdict out;

  if (!model.leafless()) {
    out.outcome = Outcome::NotHC;
    out.reason = Reason::Leaf;
    out.witness = model.leaf_witness();
    out.statement =
        "beyond the support depth every backward orbit vanishes at a leaf, so a tree "
        "with a leaf admits no hypercyclic backward shift";
    return out;
  }

  const bool unit = lam.kind() == WeightKind::Unit;
  const std::uint32_t horizon = std::min<std::uint32_t>(model.window().down, 64);
  if (model.rooted() && unit && q > 1.0) {
    auto fev = model.free_end_verdict(horizon);
    if (fev.kind == FreeEndVerdict::Kind::HasFreeEnd) {
      out.outcome = Outcome::NotHC;
      out.reason = Reason::FreeEnd;
      out.witness = fev.witness;
      out.statement =
          "unweighted rooted characterization: a free end pins the depth-n descendant "
          "count at one along its tail, so the child sums violate the necessary growth "
          "condition";
      return out;
    }
    if (fev.kind == FreeEndVerdict::Kind::NoFreeEnd) {
      out.outcome = Outcome::HC;
      out.reason = Reason::NoFreeEndUnweighted;
      out.statement =
          "unweighted rooted characterization: with no free ends every branch "
          "re-branches, gamma(u,n)^{1-q} -> 0 for each vertex, and the backward shift "
          "is hypercyclic";
      return out;
    }
    out.note = "free-end status unknown to depth " + std::to_string(fev.depth) +
               "; falling back to numerical evidence. ";
  }

  const auto use_probes = probes.empty() ? default_probes(model) : probes;
  std::vector<std::uint32_t> grid(n_max);
  std::iota(grid.begin(), grid.end(), 1u);

  if (model.rooted()) {
    auto om = decay_report(model, lam, q, DecayQuantity::Omega, use_probes, grid);
    if (om.verdict == DecayVerdict::DecaysToZero) {
      out.outcome = Outcome::HC;
      out.reason = Reason::SufficientConditionMet;
      out.evidence_graded = true;
      out.statement =
          "Omega(u, n_k) -> 0 on every probe: the right inverses T_{n_k} shrink on a "
          "dense set, which is the hypercyclicity criterion for B (verified on finitely "
          "many probes)";
      out.reports.push_back(std::move(om));
      return out;
    }
    auto fev = model.free_end_verdict(horizon);
    if (fev.kind == FreeEndVerdict::Kind::HasFreeEnd &&
        (unit || (lam.kind() == WeightKind::Geometric && lam.geometric_base() >= 1.0))) {
      auto ns = decay_report(model, lam, q, DecayQuantity::NecessarySum, {*fev.witness}, grid);
      out.outcome = Outcome::NotHC;
      out.reason = Reason::NecessaryFails;
      out.witness = fev.witness;
      out.statement =
          "along the free-end tail the sums of lambda^{-1/q} over child^n stay bounded "
          "(certified by the weight structure), contradicting the necessary condition "
          "for hypercyclicity";
      out.reports.push_back(std::move(om));
      out.reports.push_back(std::move(ns));
      return out;
    }
    out.outcome = Outcome::EvidenceOnly;
    out.reason = Reason::Inconclusive;
    out.statement =
        "the sufficient decay was not observed on the probes and no structural "
        "obstruction certifies failure on this window";
    out.reports.push_back(std::move(om));
  } else {
    auto th = decay_report(model, lam, q, DecayQuantity::Theta, use_probes, grid);
    auto om = decay_report(model, lam, q, DecayQuantity::Omega, use_probes, grid);
    if (th.verdict == DecayVerdict::DecaysToZero && om.verdict == DecayVerdict::DecaysToZero) {
      out.outcome = Outcome::HC;
      out.reason = Reason::SufficientConditionMet;
      out.evidence_graded = true;
      out.statement =
          "Theta(u, n_k) -> 0 and Omega(u, n_k) -> 0 on every probe: B^{n_k} shrinks "
          "point masses while T_{n_k} shrinks on a dense set, which is the "
          "hypercyclicity criterion (verified on finitely many probes)";
    } else {
      out.outcome = Outcome::EvidenceOnly;
      out.reason = Reason::Inconclusive;
      out.statement =
          "the joint decay of Theta and Omega was not observed on the probes";
    }
    out.reports.push_back(std::move(th));
    out.reports.push_back(std::move(om));
  }

  if (q == 1.0 && unit && out.outcome == Outcome::EvidenceOnly)
    out.note += "at q = 1 with unit weights the backward shift is a norm-one contraction, "
                "so orbits stay bounded and are never dense; the verdict vocabulary has "
                "no code for this obstruction";
  return out;
}

RaryExample example_weights_rary(std::uint32_t r, double s, double q,
                                 const VertexAddress& anchor) {
  if (r < 2) throw DomainError("the r-ary example needs r >= 2");
  if (!(q > 1.0) || !std::isfinite(q))
    throw DomainError("the r-ary example needs q in (1, infinity)");
  double rq = std::pow(static_cast<double>(r), q - 1.0);
  if (!(s > rq))
    throw DomainError("parameter constraint violated: need s > r^(q-1) = " +
                      format_double(rq) + ", got s = " + format_double(s));
  return {WeightMap::distance_to_h(s, anchor), rq / s, 1.0 / (rq * s)};
}

}  // namespace treeshift
