#include "hamcheck/jetalg.hpp"

#include <map>

#include "hamcheck/cdop.hpp"
#include "hamcheck/error.hpp"

namespace hamcheck {

DiffPoly total_derivative(std::size_t i, const DiffPoly& p) {
  DiffPoly r;
  for (const auto& [m, c] : p.terms()) {
    if (auto e = m.independent_powers()[i]) r.add_term(m.without_independent_one(i), c * e);
    for (const auto& [v, e] : m.factors()) {
      JetVar next{v.dep, v.idx.plus_unit(i)};
      r.add_term(m.without_one(v).with_factor(next), c * e);
    }
  }
  return r;
}

DiffPoly total_derivative(const MultiIndex& sigma, const DiffPoly& p) {
  DiffPoly r = p;
  for (std::size_t i = 0; i < kMaxIndependents; ++i)
    for (unsigned k = 0; k < sigma[i] && !r.is_zero(); ++k) r = total_derivative(i, r);
  return r;
}

VectorFunction total_derivative(const MultiIndex& sigma, const VectorFunction& v) {
  VectorFunction r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = total_derivative(sigma, v[i]);
  return r;
}

namespace {

// Splits p by jets of dependent `dep`: sigma -> dp/du_sigma.
std::map<MultiIndex, DiffPoly> partials_by_index(const DiffPoly& p, DepId dep) {
  std::map<MultiIndex, DiffPoly> out;
  for (const auto& v : p.variables())
    if (v.dep == dep) out.emplace(v.idx, p.partial(v));
  return out;
}

}  // namespace

VectorFunction euler(const DiffPoly& density, const std::vector<DepId>& deps) {
  VectorFunction r(deps.size());
  for (std::size_t j = 0; j < deps.size(); ++j) {
    DiffPoly acc;
    for (const auto& [sigma, dp] : partials_by_index(density, deps[j])) {
      DiffPoly t = total_derivative(sigma, dp);
      if (sigma.order() % 2) acc -= t;
      else acc += t;
    }
    r[j] = std::move(acc);
  }
  return r;
}

VectorFunction euler(const Frame& frame, const DiffPoly& density, bool include_formal) {
  std::vector<DepId> deps;
  for (DepId d = 0; d < frame.num_dependents(); ++d)
    if (include_formal || frame.dependent(d).kind == DepKind::physical) deps.push_back(d);
  return euler(density, deps);
}

DiffPoly evolutionary_apply(const VectorFunction& phi, const std::vector<DepId>& deps,
                            const DiffPoly& f) {
  if (phi.size() != deps.size())
    throw Error(ErrorKind::dimension_mismatch, "evolutionary field has wrong number of components");
  DiffPoly r;
  for (std::size_t j = 0; j < deps.size(); ++j) {
    if (phi[j].is_zero()) continue;
    for (const auto& [sigma, dp] : partials_by_index(f, deps[j]))
      r += total_derivative(sigma, phi[j]) * dp;
  }
  return r;
}

VectorFunction evolutionary_apply(const VectorFunction& phi, const std::vector<DepId>& deps,
                                  const VectorFunction& f) {
  VectorFunction r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = evolutionary_apply(phi, deps, f[i]);
  return r;
}

CDiffOp linearize(const VectorFunction& f, const std::vector<DepId>& deps) {
  CDiffOp op(f.size(), deps.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < deps.size(); ++j)
      for (const auto& [sigma, dp] : partials_by_index(f[i], deps[j])) op.add(i, j, sigma, dp);
  return op;
}

}  // namespace hamcheck
