#ifndef HAMCHECK_KUPER_HPP
#define HAMCHECK_KUPER_HPP

#include <optional>
#include <vector>

#include "hamcheck/eqsys.hpp"
#include "hamcheck/multivec.hpp"

namespace hamcheck {

// The block L built from G = F + A1*(w) + A2*(w): its linearization in the
// base unknowns or in w, or the adjoint of either.
enum class DeformationBlock { unknowns, fresh, unknowns_adjoint, fresh_adjoint };

struct DeformedSystem {
  EquationSystem base;
  CDiffOp a1, a2;
  std::vector<DepId> fresh;
  EquationSystem system;  // F + A1*(w) = 0, A2*(w) = 0 over (unknowns, w)
  CDiffOp l;
  CDiffOp tilde1;  // [[A1, -A1], [0, L]]
  CDiffOp tilde2;  // [[A2, -A2], [-L, 0]]
  BivectorCheck check1;
  BivectorCheck check2;

  bool certified() const { return check1.certified() && check2.certified(); }
};

// `fresh` must be dependents of the base frame not used by the base system.
// Leaders of the deformed system are its highest jets under `ranking`
// (the base ranking when empty), with the fresh dependents ranked last.
DeformedSystem deform(const Bivector& a1, const Bivector& a2, const std::vector<DepId>& fresh,
                      std::optional<Ranking> ranking = std::nullopt,
                      DeformationBlock block = DeformationBlock::unknowns_adjoint);

struct LiftedEntry {
  VectorFunction psi;             // (psi_i, -psi_{i+1})
  bool genfn = false;
  VectorFunction genfn_residual;  // reduced l~*(psi) when not a generating function
};

struct LiftedChain {
  std::vector<LiftedEntry> entries;
  std::optional<MagriCheck> magri;  // run when every entry is a generating function

  bool ok() const;
};

// Throws need_successor for a one-element chain.
LiftedChain lift_hierarchy(const DeformedSystem& d, const std::vector<GenFn>& chain);

struct ConservationCheck {
  bool conserved = false;
  DiffPoly density;         // <psi_i, u_t - F~1> + <psi_{i+1}, F~2>
  VectorFunction residual;  // its euler derivative over (unknowns, w)
};

// Throws precondition unless A1(psi_i) = A2(psi_{i+1}) on the base and the
// base equations are first order in one independent.
ConservationCheck check_conserved(const DeformedSystem& d, const GenFn& psi_i, const GenFn& psi_next);

}  // namespace hamcheck

#endif  // HAMCHECK_KUPER_HPP
