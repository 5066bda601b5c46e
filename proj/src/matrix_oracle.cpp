#include "treeshift/matrix_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"

namespace treeshift {

namespace {

constexpr std::size_t kDimCap = 16000;

bool in_sub(const TreeModel& model, const DepthWindow& sub, const VertexAddress& v) {
  if (model.rooted()) return v.path.size() <= sub.down;
  return v.hops <= sub.up && v.level() <= static_cast<int>(sub.down);
}

std::vector<VertexAddress> sub_vertices(const TreeModel& model, DepthWindow sub) {
  if (model.is_finite()) {
    std::vector<VertexAddress> kept;
    for (auto& v : model.window_vertices())
      if (in_sub(model, sub, v)) kept.push_back(std::move(v));
    return kept;
  }
  return model.with_window(sub).window_vertices();
}

// Parent in the infinite tree, ignoring the window; nullopt only at a root.
std::optional<VertexAddress> raw_parent(const TreeModel& model, const VertexAddress& v) {
  if (model.rooted()) return model.parent(v);
  VertexAddress p = v;
  if (p.path.empty()) {
    ++p.hops;
  } else {
    p.path.pop_back();
  }
  return p;
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent must satisfy p >= 1");
}

}  // namespace

TruncatedOperator truncate_operator(OperatorKind kind, const TreeModel& model,
                                    const WeightMap& lam, DepthWindow sub, double p,
                                    std::uint32_t power) {
  check_p(p);
  const DepthWindow& full = model.window();
  if (sub.down > full.down || sub.up > full.up)
    throw InputError("truncation window exceeds the model window");
  if (kind == OperatorKind::RightInverse && power == 0)
    throw InputError("right-inverse truncation needs power >= 1");

  TruncatedOperator op;
  op.kind = kind;
  op.power = (kind == OperatorKind::RightInverse) ? power : 1;
  op.p = p;
  op.vertices = sub_vertices(model, sub);
  op.dim = op.vertices.size();
  if (op.dim == 0) throw InputError("truncation window contains no vertices");
  if (op.dim > kDimCap) {
    std::ostringstream msg;
    msg << "truncation dimension " << op.dim << " exceeds the cap " << kDimCap;
    throw InputError(msg.str());
  }

  std::map<VertexAddress, std::size_t, AddressOrder> index;
  for (std::size_t i = 0; i < op.dim; ++i) index.emplace(op.vertices[i], i);

  op.weights.reserve(op.dim);
  for (const auto& v : op.vertices) op.weights.push_back(lam.at(model, v));

  op.a.assign(op.dim * op.dim, 0.0);
  auto put = [&](std::size_t i, std::size_t j, double val) { op.a[i * op.dim + j] = val; };

  for (std::size_t j = 0; j < op.dim; ++j) {
    const VertexAddress& u = op.vertices[j];
    switch (kind) {
      case OperatorKind::Forward: {
        std::size_t kept = 0;
        for (const auto& c : model.children_clipped(u)) {
          auto it = index.find(c);
          if (it == index.end()) continue;
          put(it->second, j, 1.0);
          ++kept;
        }
        if (kept < model.outdegree(u)) op.bottom_boundary = true;
        break;
      }
      case OperatorKind::Adjoint:
      case OperatorKind::Backward: {
        const auto par = raw_parent(model, u);
        if (!par) break;  // a root: genuinely no parent, nothing discarded
        auto it = index.find(*par);
        if (it == index.end()) {
          op.top_boundary = true;
          break;
        }
        if (kind == OperatorKind::Backward) {
          put(it->second, j, 1.0);
        } else {
          put(it->second, j, op.weights[j] / op.weights[it->second]);
        }
        break;
      }
      case OperatorKind::RightInverse: {
        const double g = model.gamma(u, op.power);
        if (g == 0.0)
          throw DomainError("right inverse undefined: no depth-" + std::to_string(op.power) +
                            " descendants below '" + model.format(u) + "'");
        std::size_t kept = 0;
        for (const auto& w : model.children_n(u, op.power)) {
          auto it = index.find(w);
          if (it == index.end()) continue;
          put(it->second, j, 1.0 / g);
          ++kept;
        }
        if (static_cast<double>(kept) < g) op.bottom_boundary = true;
        break;
      }
    }
  }
  return op;
}

PowerIterationResult estimate_norm_p2(const TruncatedOperator& op, double tol,
                                      int max_iterations) {
  if (op.p != 2.0) throw DomainError("power iteration is defined for p = 2 only");
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  if (max_iterations < 1) throw InputError("at least one iteration is required");

  const std::size_t n = op.dim;
  PowerIterationResult res;
  if (n == 0) {
    res.converged = true;
    return res;
  }

  const auto& A = op.a;
  const auto& lamv = op.weights;
  std::vector<double> x(n, 1.0), y(n), z(n);

  auto lambda_norm = [&](const std::vector<double>& v) {
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(lamv[i] * v[i] * v[i]);
    return std::sqrt(std::max(s.value(), 0.0));
  };

  {
    const double nx = lambda_norm(x);
    for (auto& e : x) e /= nx;
  }

  double prev = -1.0;
  double sigma = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      KahanSum s;
      const double* row = A.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) s.add(row[j] * x[j]);
      y[i] = s.value();
    }
    // z = D^{-1} A^T D y — the weighted adjoint applied to y
    for (std::size_t i = 0; i < n; ++i) y[i] *= lamv[i];
    for (std::size_t i = 0; i < n; ++i) z[i] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = A.data() + i * n;
      const double yi = y[i];
      if (yi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) z[j] += row[j] * yi;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] /= lamv[i];

    KahanSum rq;  // <x, A*A x>_lambda = ||A x||^2 for unit x
    for (std::size_t i = 0; i < n; ++i) rq.add(lamv[i] * x[i] * z[i]);
    sigma = std::sqrt(std::max(rq.value(), 0.0));
    res.iterations = it;
    res.last_delta = std::abs(sigma - prev);
    if (prev >= 0.0 && res.last_delta <= tol * std::max(sigma, 1e-300)) {
      res.sigma = sigma;
      res.converged = true;
      return res;
    }
    const double nz = lambda_norm(z);
    if (nz == 0.0) {
      res.sigma = 0.0;
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / nz;
    prev = sigma;
  }
  res.sigma = sigma;
  res.converged = false;
  return res;
}

double lower_bound_norm_p(const TruncatedOperator& op, int trials, std::uint64_t seed) {
  check_p(op.p);
  if (trials < 0) throw InputError("trial count must be nonnegative");
  const std::size_t n = op.dim;
  const double p = op.p;
  const auto& A = op.a;
  const auto& lamv = op.weights;

  auto p_norm = [&](const std::vector<double>& v) {
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(lamv[i] * std::pow(std::abs(v[i]), p));
    return std::pow(s.value(), 1.0 / p);
  };

  double best = 0.0;
  // point masses: ratio for column j in closed form
  for (std::size_t j = 0; j < n; ++j) {
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = A[i * n + j];
      if (e != 0.0) s.add(lamv[i] * std::pow(std::abs(e), p));
    }
    const double num = std::pow(s.value(), 1.0 / p);
    best = std::max(best, num / std::pow(lamv[j], 1.0 / p));
  }

  std::mt19937_64 rng(seed);
  std::vector<double> x(n), y(n);
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i) x[i] = unit_interval(rng());
    const double nx = p_norm(x);
    if (nx == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      KahanSum s;
      const double* row = A.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) s.add(row[j] * x[j]);
      y[i] = s.value();
    }
    best = std::max(best, p_norm(y) / nx);
  }
  return best;
}

}  // namespace treeshift
