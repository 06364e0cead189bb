#include "hamcheck/kuper.hpp"

#include <algorithm>
#include <set>

#include "hamcheck/error.hpp"
#include "hamcheck/jetalg.hpp"
#include "hamcheck/render.hpp"

namespace hamcheck {

namespace {

VectorFunction concat(const VectorFunction& a, const VectorFunction& b) {
  std::vector<DiffPoly> e = a.entries();
  e.insert(e.end(), b.begin(), b.end());
  return VectorFunction(std::move(e));
}

}  // namespace

DeformedSystem deform(const Bivector& a1, const Bivector& a2, const std::vector<DepId>& fresh,
                      std::optional<Ranking> ranking, DeformationBlock block) {
  const EquationSystem& base = a1.home();
  if (!(a2.home() == base))
    throw Error(ErrorKind::home_mismatch, "deformation needs both bivectors on one equation");
  if (a1.op().is_zero() || a2.op().is_zero())
    throw Error(ErrorKind::precondition, "deformation needs nonzero Hamiltonian operators");
  const std::size_t l = base.num_equations();
  if (fresh.size() != l)
    throw Error(ErrorKind::dimension_mismatch,
                "deformation needs " + std::to_string(l) + " fresh dependents, got " + std::to_string(fresh.size()));
  const Frame& frame = base.frame();
  std::set<DepId> used;
  for (const auto& f : base.equations())
    for (auto d : f.dependents()) used.insert(d);
  for (auto d : base.unknowns()) used.insert(d);
  for (auto d : fresh) {
    if (d >= frame.num_dependents())
      throw Error(ErrorKind::invalid_frame, "fresh dependent is not part of the frame");
    if (used.count(d) || std::count(fresh.begin(), fresh.end(), d) > 1)
      throw Error(ErrorKind::invalid_frame, "fresh dependent '" + frame.dependent(d).name + "' is already in use");
  }

  const VectorFunction w = VectorFunction::of_dependents(fresh);
  const VectorFunction a1w = apply(adjoint(a1.op()), w);
  const VectorFunction a2w = apply(adjoint(a2.op()), w);
  const VectorFunction f1 = base.equations() + a1w;

  std::vector<DepId> unknowns = base.unknowns();
  unknowns.insert(unknowns.end(), fresh.begin(), fresh.end());
  const Ranking& r = ranking ? *ranking : base.ranking();
  std::vector<DepId> precedence = r.dependent_precedence();
  if (precedence.empty()) precedence = base.unknowns();
  for (auto d : fresh)
    if (std::find(precedence.begin(), precedence.end(), d) == precedence.end()) precedence.push_back(d);
  Ranking deformed_ranking(r.independent_precedence(), precedence, r.rule());

  EquationSystem system = EquationSystem::solve_for_leaders(frame, unknowns, concat(f1, a2w), deformed_ranking,
                                                            base.passivity_depth());

  const bool in_fresh = block == DeformationBlock::fresh || block == DeformationBlock::fresh_adjoint;
  CDiffOp l_op = linearize(f1 + a2w, in_fresh ? fresh : base.unknowns());
  if (block == DeformationBlock::unknowns_adjoint || block == DeformationBlock::fresh_adjoint) l_op = adjoint(l_op);
  const std::size_t m = base.unknowns().size();
  CDiffOp t1(2 * m, 2 * l), t2(2 * m, 2 * l);
  t1.set_block(0, 0, a1.op());
  t1.set_block(0, l, -a1.op());
  t1.set_block(m, l, l_op);
  t2.set_block(0, 0, a2.op());
  t2.set_block(0, l, -a2.op());
  t2.set_block(m, 0, -l_op);

  BivectorCheck c1 = certify_bivector(system, t1);
  BivectorCheck c2 = certify_bivector(system, t2);
  return DeformedSystem{base,           a1.op(),        a2.op(),        fresh,          std::move(system),
                        std::move(l_op), std::move(t1), std::move(t2), std::move(c1), std::move(c2)};
}

bool LiftedChain::ok() const {
  for (const auto& e : entries)
    if (!e.genfn) return false;
  return !magri || magri->ok;
}

LiftedChain lift_hierarchy(const DeformedSystem& d, const std::vector<GenFn>& chain) {
  LiftedChain out;
  if (chain.empty()) return out;
  if (chain.size() == 1)
    throw Error(ErrorKind::need_successor, "lifting psi_1 needs its successor psi_2 in the chain");
  for (const auto& g : chain)
    if (!(g.home() == d.base))
      throw Error(ErrorKind::home_mismatch, "chain entries must be generating functions of the base equation");
  std::vector<GenFn> lifted;
  bool all = true;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    LiftedEntry e;
    e.psi = concat(chain[i].psi(), -chain[i + 1].psi());
    e.genfn_residual = genfn_residual(d.system, e.psi);
    e.genfn = e.genfn_residual.is_zero();
    if (e.genfn) lifted.push_back(GenFn::certify(d.system, e.psi));
    else all = false;
    out.entries.push_back(std::move(e));
  }
  if (all && d.certified()) out.magri = verify_magri(*d.check1.bivector, *d.check2.bivector, lifted);
  return out;
}

ConservationCheck check_conserved(const DeformedSystem& d, const GenFn& psi_i, const GenFn& psi_next) {
  const EquationSystem& base = d.base;
  if (!base.is_evolutionary())
    throw Error(ErrorKind::precondition, "conservation check needs a base system in evolution form");
  VectorFunction magri = base.reduce(apply(d.a1, psi_i.psi()) - apply(d.a2, psi_next.psi()));
  if (!magri.is_zero())
    throw Error(ErrorKind::precondition,
                "A1(psi_i) != A2(psi_{i+1}) on the base: residual " + to_string(base.frame(), magri));
  const std::size_t l = base.num_equations();
  const auto& eqs = d.system.equations();
  ConservationCheck out;
  for (const auto& rule : base.rules()) {
    const std::size_t k = rule.equation;
    const Rational inv = 1 / rule.scale;
    out.density += psi_i.psi()[k] * (DiffPoly::var(rule.lead) - inv * eqs[k]);
    out.density += psi_next.psi()[k] * (inv * eqs[l + k]);
  }
  std::vector<DepId> deps = d.system.unknowns();
  out.residual = euler(out.density, deps);
  out.conserved = out.residual.is_zero();
  return out;
}

}  // namespace hamcheck
