#include "treeshift/function.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "treeshift/errors.hpp"
#include "treeshift/numerics.hpp"

namespace treeshift {

TreeFunction TreeFunction::point_mass(const VertexAddress& v, std::complex<double> a) {
  TreeFunction f;
  f.set(v, a);
  return f;
}

void TreeFunction::set(const VertexAddress& v, std::complex<double> a) {
  if (a == std::complex<double>{}) {
    m_.erase(v);
    return;
  }
  m_[v] = a;
}

void TreeFunction::add(const VertexAddress& v, std::complex<double> a) {
  auto it = m_.find(v);
  if (it == m_.end()) {
    if (a != std::complex<double>{}) m_.emplace(v, a);
    return;
  }
  it->second += a;
  if (it->second == std::complex<double>{}) m_.erase(it);
}

std::complex<double> TreeFunction::at(const VertexAddress& v) const {
  auto it = m_.find(v);
  return it == m_.end() ? std::complex<double>{} : it->second;
}

int TreeFunction::max_level() const {
  if (m_.empty()) throw InputError("max_level of an empty function");
  int best = m_.begin()->first.level();
  for (const auto& [v, a] : m_) best = std::max(best, v.level());
  return best;
}

TreeFunction& TreeFunction::operator+=(const TreeFunction& o) {
  for (const auto& [v, a] : o.m_) add(v, a);
  return *this;
}

TreeFunction& TreeFunction::operator-=(const TreeFunction& o) {
  for (const auto& [v, a] : o.m_) add(v, -a);
  return *this;
}

TreeFunction& TreeFunction::operator*=(std::complex<double> c) {
  if (c == std::complex<double>{}) {
    m_.clear();
    return *this;
  }
  for (auto& [v, a] : m_) a *= c;
  return *this;
}

double norm_p(const TreeFunction& f, const WeightMap& lam, const TreeModel& model, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw DomainError("norm exponent p must lie in [1, infinity)");
  KahanSum s;
  for (const auto& [v, a] : f.entries())
    s.add(std::pow(std::abs(a), p) * lam.at(model, v));
  return std::pow(s.value(), 1.0 / p);
}

std::complex<double> dual_pairing(const TreeFunction& f, const TreeFunction& g,
                                  const WeightMap& lam, const TreeModel& model) {
  KahanComplexSum s;
  const auto& a = f.entries();
  const auto& b = g.entries();
  auto ia = a.begin();
  auto ib = b.begin();
  AddressOrder lt;
  while (ia != a.end() && ib != b.end()) {
    if (lt(ia->first, ib->first))
      ++ia;
    else if (lt(ib->first, ia->first))
      ++ib;
    else {
      s.add(ia->second * ib->second * lam.at(model, ia->first));
      ++ia;
      ++ib;
    }
  }
  return s.value();
}

TreeFunction random_tree_function(const TreeModel& model, std::uint32_t support_depth,
                                  std::size_t support_size, std::uint64_t seed) {
  if (support_size < 1) throw InputError("support_size must be >= 1");
  auto candidates = model.vertices_to_depth(support_depth);
  if (support_size > candidates.size())
    throw WindowExhausted("requested support of " + std::to_string(support_size) +
                          " exceeds the " + std::to_string(candidates.size()) +
                          " vertices available in the ball");
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates; modulo bias is irrelevant here and keeping the
  // mapping hand-rolled pins the stream across standard libraries
  for (std::size_t i = 0; i < support_size; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  TreeFunction f;
  for (std::size_t i = 0; i < support_size; ++i) {
    double re = unit_interval(rng());
    double im = unit_interval(rng());
    f.set(candidates[i], {re, im});
  }
  return f;
}

}  // namespace treeshift
