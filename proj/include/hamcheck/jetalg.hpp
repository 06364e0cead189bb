#ifndef HAMCHECK_JETALG_HPP
#define HAMCHECK_JETALG_HPP

#include <vector>

#include "hamcheck/diffpoly.hpp"

namespace hamcheck {

class CDiffOp;

// D_i = d/dx_i + sum u_{sigma i} d/du_sigma.
DiffPoly total_derivative(std::size_t i, const DiffPoly& p);
DiffPoly total_derivative(const MultiIndex& sigma, const DiffPoly& p);
VectorFunction total_derivative(const MultiIndex& sigma, const VectorFunction& v);

// Variational derivative with respect to each dependent in `deps`:
// component j is sum_sigma (-1)^|sigma| D_sigma(dL/du^j_sigma).
VectorFunction euler(const DiffPoly& density, const std::vector<DepId>& deps);
// Over the physical dependents of the frame, or every dependent when
// include_formal is set.
VectorFunction euler(const Frame& frame, const DiffPoly& density, bool include_formal = false);

// E_phi(f) = sum_{j,sigma} D_sigma(phi^j) df/du^{deps_j}_sigma.
DiffPoly evolutionary_apply(const VectorFunction& phi, const std::vector<DepId>& deps,
                            const DiffPoly& f);
VectorFunction evolutionary_apply(const VectorFunction& phi, const std::vector<DepId>& deps,
                                  const VectorFunction& f);

// l_f with entry (i, j) = sum_sigma df^i/du^{deps_j}_sigma D_sigma.
CDiffOp linearize(const VectorFunction& f, const std::vector<DepId>& deps);

}  // namespace hamcheck

#endif  // HAMCHECK_JETALG_HPP
