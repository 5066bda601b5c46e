#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "treeshift/errors.hpp"
#include "treeshift/function.hpp"
#include "treeshift/matrix_oracle.hpp"
#include "treeshift/operators.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

using namespace treeshift;

namespace {

VertexAddress addr(const std::string& text) { return VertexAddress::parse(text); }

std::vector<double> matvec(const TruncatedOperator& op, const std::vector<double>& x) {
  std::vector<double> y(op.dim, 0.0);
  for (std::size_t i = 0; i < op.dim; ++i)
    for (std::size_t j = 0; j < op.dim; ++j) y[i] += op.at(i, j) * x[j];
  return y;
}

// Sample a (real) tree function on the truncation basis.
std::vector<double> sample(const TruncatedOperator& op, const TreeFunction& f) {
  std::vector<double> x(op.dim, 0.0);
  for (std::size_t j = 0; j < op.dim; ++j) x[j] = f.at(op.vertices[j]).real();
  return x;
}

TreeFunction real_random(const TreeModel& model, std::uint32_t depth, std::size_t size,
                         std::uint64_t seed) {
  const TreeFunction f = random_tree_function(model, depth, size, seed);
  TreeFunction out;
  for (const auto& [v, a] : f.entries()) out.set(v, {a.real(), 0.0});
  return out;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("frozen small matrices on the unary line") {
  const auto line = TreeModel::kary_rooted(1, {0, 5});
  const auto unit = WeightMap::unit();
  const auto geo = WeightMap::geometric(0.5);

  const auto S = truncate_operator(OperatorKind::Forward, line, unit, {0, 5}, 2.0);
  REQUIRE(S.dim == 6);
  CHECK(S.vertices.front() == addr("root"));
  CHECK(S.bottom_boundary);  // the bottom vertex's child was cut off
  CHECK_FALSE(S.top_boundary);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(S.at(i, j) == ((i == j + 1) ? 1.0 : 0.0));

  const auto B = truncate_operator(OperatorKind::Backward, line, unit, {0, 5}, 2.0);
  CHECK_FALSE(B.top_boundary);  // the root genuinely has no parent
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(B.at(i, j) == ((j == i + 1) ? 1.0 : 0.0));

  const auto Sstar = truncate_operator(OperatorKind::Adjoint, line, geo, {0, 5}, 2.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(Sstar.at(i, j) == ((j == i + 1) ? 0.5 : 0.0));

  // backward rows on the binary tree have one 1 per child
  const auto bin = TreeModel::kary_rooted(2, {0, 4});
  const auto Bb = truncate_operator(OperatorKind::Backward, bin, unit, {0, 4}, 2.0);
  for (std::size_t i = 0; i < Bb.dim; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < Bb.dim; ++j) row += Bb.at(i, j);
    const double deg = Bb.vertices[i].path.size() == 4 ? 0.0 : 2.0;
    CHECK(row == deg);
  }
}

TEST_CASE("matrix action agrees with the operator library") {
  const auto model = TreeModel::kary_rooted(2, {0, 10});
  const auto geo = WeightMap::geometric(0.8);
  const DepthWindow sub{0, 8};

  const auto S = truncate_operator(OperatorKind::Forward, model, geo, sub, 2.0);
  const auto Star = truncate_operator(OperatorKind::Adjoint, model, geo, sub, 2.0);
  const auto B = truncate_operator(OperatorKind::Backward, model, geo, sub, 2.0);
  const auto T2 = truncate_operator(OperatorKind::RightInverse, model, geo, sub, 2.0, 2);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto f = real_random(model, 5, 8, seed);
    const auto x = sample(S, f);

    const auto ys = matvec(S, x);
    const auto fs = apply_S(f, model);
    const auto ya = matvec(Star, x);
    const auto fa = apply_Sstar(f, geo, model);
    const auto yb = matvec(B, x);
    const auto fb = apply_B(f, model);
    const auto yt = matvec(T2, x);
    const auto ft = apply_T_n(f, 2, model);
    for (std::size_t i = 0; i < S.dim; ++i) {
      const auto& v = S.vertices[i];
      CHECK(std::abs(ys[i] - fs.at(v).real()) < 1e-14);
      CHECK(std::abs(ya[i] - fa.at(v).real()) < 1e-14);
      CHECK(std::abs(yb[i] - fb.at(v).real()) < 1e-14);
      CHECK(std::abs(yt[i] - ft.at(v).real()) < 1e-14);
    }
  }
}

TEST_CASE("power iteration: exact fixed points and ordering") {
  const auto unit = WeightMap::unit();

  // the truncated Gram of S is diagonal; sigma locks onto sqrt(sup ratio)
  const auto bin = TreeModel::kary_rooted(2, {0, 9});
  const auto S9 = truncate_operator(OperatorKind::Forward, bin, unit, {0, 9}, 2.0);
  const auto r9 = estimate_norm_p2(S9);
  CHECK(r9.converged);
  CHECK(r9.sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r9.iterations <= 10);
  CHECK(r9.sigma <= shift_norm(unit, 2.0, bin).value + 1e-9);

  const auto line = TreeModel::kary_rooted(1, {0, 6});
  const auto SL = truncate_operator(OperatorKind::Forward, line, unit, {0, 6}, 2.0);
  CHECK(estimate_norm_p2(SL).sigma == doctest::Approx(1.0).epsilon(1e-12));

  // backward truncations are genuine corners: monotone in depth, capped by
  // the closed-form norm
  const auto B6 = truncate_operator(OperatorKind::Backward, bin, unit, {0, 6}, 2.0);
  const auto B9 = truncate_operator(OperatorKind::Backward, bin, unit, {0, 9}, 2.0);
  const auto rb6 = estimate_norm_p2(B6);
  const auto rb9 = estimate_norm_p2(B9);
  CHECK(rb6.converged);
  CHECK(rb9.converged);
  CHECK(rb6.sigma <= rb9.sigma + 1e-5);
  CHECK(rb9.sigma <= std::sqrt(2.0) + 1e-9);
  CHECK(rb9.sigma > 1.2);

  // a truncation with no surviving entries has norm zero
  const auto Z = truncate_operator(OperatorKind::Forward, bin, unit, {0, 0}, 2.0);
  const auto rz = estimate_norm_p2(Z);
  CHECK(rz.converged);
  CHECK(rz.sigma == 0.0);

  // determinism: identical runs give identical bits
  const auto again = estimate_norm_p2(B9);
  CHECK(again.sigma == rb9.sigma);
  CHECK(again.iterations == rb9.iterations);
  CHECK(truncate_operator(OperatorKind::Backward, bin, unit, {0, 9}, 2.0).a == B9.a);

  CHECK_THROWS_AS(
      (void)estimate_norm_p2(truncate_operator(OperatorKind::Forward, bin, unit, {0, 4}, 3.0)),
      DomainError);
  CHECK_THROWS_AS((void)estimate_norm_p2(S9, -1.0), InputError);
  CHECK_THROWS_AS((void)estimate_norm_p2(S9, 1e-6, 0), InputError);
}

TEST_CASE("lower bounds are certified and attain the easy optima") {
  const auto bin = TreeModel::kary_rooted(2, {0, 8});
  const auto unit = WeightMap::unit();

  const auto S = truncate_operator(OperatorKind::Forward, bin, unit, {0, 8}, 2.0);
  const double lb0 = lower_bound_norm_p(S, 0, 1);
  CHECK(lb0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));  // point-mass column
  const double lb = lower_bound_norm_p(S, 8, 1);
  CHECK(lb >= lb0);
  CHECK(lb <= shift_norm(unit, 2.0, bin).value + 1e-9);

  const auto B1 = truncate_operator(OperatorKind::Backward, bin, unit, {0, 8}, 1.0);
  CHECK(lower_bound_norm_p(B1, 4, 7) == doctest::Approx(1.0).epsilon(1e-12));

  // deterministic in the seed
  CHECK(lower_bound_norm_p(S, 5, 99) == lower_bound_norm_p(S, 5, 99));
  CHECK_THROWS_AS((void)lower_bound_norm_p(S, -1, 1), InputError);
}

TEST_CASE("boundary flags track discarded mass") {
  const auto unit = WeightMap::unit();

  // family window bottoms always clip the forward shift
  const auto bin = TreeModel::kary_rooted(2, {0, 6});
  CHECK(truncate_operator(OperatorKind::Forward, bin, unit, {0, 6}, 2.0).bottom_boundary);
  CHECK_FALSE(truncate_operator(OperatorKind::Backward, bin, unit, {0, 6}, 2.0).top_boundary);

  // a finite tree truncated at full depth loses nothing
  const auto fin = TreeModel::finite({{"r", "a"}, {"r", "b"}, {"a", "c"}}, "r");
  const auto Sf = truncate_operator(OperatorKind::Forward, fin, unit, fin.window(), 2.0);
  CHECK_FALSE(Sf.bottom_boundary);
  CHECK_FALSE(Sf.top_boundary);
  // ... but a strict sub-window does
  CHECK(truncate_operator(OperatorKind::Forward, fin, unit, {0, 1}, 2.0).bottom_boundary);

  // the unrooted sub-top vertex has a parent outside the compression
  const auto ubin = TreeModel::kary_unrooted(2, {4, 4});
  const auto Bu = truncate_operator(OperatorKind::Backward, ubin, unit, {2, 2}, 2.0);
  CHECK(Bu.top_boundary);

  CHECK_THROWS_AS(
      (void)truncate_operator(OperatorKind::Forward, ubin, unit, {5, 4}, 2.0), InputError);
}

TEST_CASE("right-inverse truncations respect depth reach") {
  const auto model = TreeModel::kary_rooted(2, {0, 10});
  const auto unit = WeightMap::unit();

  // gamma for the bottom sub vertices needs model depth sub.down + power
  CHECK_THROWS_AS(
      (void)truncate_operator(OperatorKind::RightInverse, model, unit, {0, 10}, 2.0, 2),
      WindowExhausted);
  const auto T2 = truncate_operator(OperatorKind::RightInverse, model, unit, {0, 8}, 2.0, 2);
  CHECK(T2.bottom_boundary);  // depth 7 and 8 columns lose their images
  CHECK(T2.power == 2);

  CHECK_THROWS_AS(
      (void)truncate_operator(OperatorKind::RightInverse, model, unit, {0, 8}, 2.0, 0),
      InputError);

  // a leaf inside the window makes the right inverse undefined
  const auto leafline = TreeModel::unilateral_leaf_line({4, 0});
  CHECK_THROWS_AS(
      (void)truncate_operator(OperatorKind::RightInverse, leafline, unit, {4, 0}, 2.0, 1),
      DomainError);
}

TEST_CASE("dimension cap is enforced") {
  const auto big = TreeModel::kary_rooted(2, {0, 14});
  CHECK_THROWS_AS(
      (void)truncate_operator(OperatorKind::Forward, big, WeightMap::unit(), {0, 14}, 2.0),
      InputError);
}

}  // TEST_SUITE
