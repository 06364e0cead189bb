#include "hamcheck/multivec.hpp"

#include <algorithm>
#include <array>

#include "hamcheck/error.hpp"
#include "hamcheck/jetalg.hpp"
#include "hamcheck/kernels.hpp"
#include "hamcheck/render.hpp"

namespace hamcheck {

VectorFunction FormalArgs::vec(std::size_t slot) const {
  return VectorFunction::of_dependents(slots.at(slot));
}

bool FormalArgs::is_formal(DepId d) const {
  for (const auto& s : slots)
    if (std::find(s.begin(), s.end(), d) != s.end()) return true;
  return false;
}

FormalArgs make_formal_args(const Frame& frame, std::size_t length, std::size_t count) {
  std::string stem = "psi";
  auto taken = [&](const std::string& s) {
    for (const auto& d : frame.dependents())
      if (d.name.rfind(s, 0) == 0) return true;
    return false;
  };
  while (taken(stem)) stem += "z";
  std::vector<Dependent> extra;
  FormalArgs args;
  const DepId base = static_cast<DepId>(frame.num_dependents());
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<DepId> slot;
    for (std::size_t j = 0; j < length; ++j) {
      std::string name = stem + std::to_string(a + 1);
      if (length > 1) name += "k" + std::to_string(j + 1);
      slot.push_back(base + static_cast<DepId>(extra.size()));
      extra.push_back({name, DepKind::formal});
    }
    args.slots.push_back(std::move(slot));
  }
  args.frame = frame.extended(extra);
  return args;
}

namespace {

// Replaces every jet of `slot` by the matching derivative of `value`.
DiffPoly plug(const DiffPoly& p, const std::vector<DepId>& slot, const VectorFunction& value) {
  return substitute(p, [&](const JetVar& v) {
    auto it = std::find(slot.begin(), slot.end(), v.dep);
    if (it == slot.end()) return DiffPoly::var(v);
    return total_derivative(v.idx, value[static_cast<std::size_t>(it - slot.begin())]);
  });
}

std::string dims(const CDiffOp& a) { return std::to_string(a.rows()) + "x" + std::to_string(a.cols()); }

}  // namespace

VectorFunction Bivector::b_star(const VectorFunction& psi1, const VectorFunction& psi2) const {
  CDiffOp delta = b_.map_coefficients([&](const DiffPoly& c) { return plug(c, args_.slots[0], psi2); });
  return home_.reduce(apply(adjoint(delta), psi1));
}

BivectorCheck certify_bivector(const EquationSystem& eq, const CDiffOp& a) {
  const std::size_t l = eq.num_equations();
  const std::size_t m = eq.unknowns().size();
  if (l != m)
    throw Error(ErrorKind::dimension_mismatch, "bivectors need as many equations (" + std::to_string(l) +
                                                   ") as unknowns (" + std::to_string(m) + ")");
  if (a.rows() != m || a.cols() != l)
    throw Error(ErrorKind::dimension_mismatch,
                "bivector must be " + std::to_string(m) + "x" + std::to_string(l) + ", got " + dims(a));
  const CDiffOp theta = compose(eq.linearization(), a) - compose(adjoint(a), eq.adjoint_linearization());
  CDiffOp residual = eq.restrict_op(theta);
  if (!residual.is_zero()) return BivectorCheck{std::nullopt, std::move(residual)};
  FormalArgs args = make_formal_args(eq.frame(), l);
  CDiffOp b = factor_through_F(eq, apply(theta, args.vec(0)));
  return BivectorCheck{Bivector(eq, a, std::move(b), std::move(args)), std::move(residual)};
}

Bivector require_bivector(const EquationSystem& eq, const CDiffOp& a) {
  auto check = certify_bivector(eq, a);
  if (!check.certified())
    throw Error(ErrorKind::certification_failure,
                "not a bivector: l_F A - A* l_F* = " + to_string(eq.frame(), check.residual) + " on the equation");
  return std::move(*check.bivector);
}

VectorFunction evolution_b_star(const EquationSystem& eq, const CDiffOp& a, const VectorFunction& psi1,
                                const VectorFunction& psi2) {
  return eq.reduce(apply(adjoint(linearize(apply(a, psi2), eq.unknowns())), psi1));
}

TrivectorRep schouten(const Bivector& a1, const Bivector& a2) {
  if (!(a1.home() == a2.home()))
    throw Error(ErrorKind::home_mismatch, "Schouten bracket of bivectors on different equations");
  const EquationSystem& eq = a1.home();
  const auto& deps = eq.unknowns();
  const FormalArgs& args = a1.args();
  const VectorFunction p1 = args.vec(0);
  const VectorFunction p2 = args.vec(1);
  const VectorFunction a1p1 = apply(a1.op(), p1), a1p2 = apply(a1.op(), p2);
  const VectorFunction a2p1 = apply(a2.op(), p1), a2p2 = apply(a2.op(), p2);
  VectorFunction t = evolutionary_apply(a2p2, deps, a1p1) - evolutionary_apply(a2p1, deps, a1p2) +
                     evolutionary_apply(a1p2, deps, a2p1) - evolutionary_apply(a1p1, deps, a2p2);
  t -= apply(a1.op(), a2.b_star(p1, p2));
  t -= apply(a2.op(), a1.b_star(p1, p2));
  return TrivectorRep{args, eq.reduce(t)};
}

namespace {

DiffPoly rename_slots(const DiffPoly& p, const FormalArgs& args, const std::vector<std::size_t>& perm) {
  return p.rename([&](DepId d) {
    for (std::size_t a = 0; a < perm.size(); ++a) {
      const auto& s = args.slots[a];
      auto it = std::find(s.begin(), s.end(), d);
      if (it != s.end()) return args.slots[perm[a]][static_cast<std::size_t>(it - s.begin())];
    }
    return d;
  });
}

// Sum over permutations of the first `n` slots with signs.
DiffPoly skew(const DiffPoly& rho, const FormalArgs& args, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  DiffPoly out;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    DiffPoly term = rename_slots(rho, args, perm);
    if (inversions % 2) out -= term;
    else out += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool formal_jets_along(const DiffPoly& p, const FormalArgs& args, std::size_t dir) {
  for (const auto& v : p.variables())
    if (args.is_formal(v.dep) && v.idx[dir] > 0) return true;
  return false;
}

// Euler test of a density in `n` formal slots against the equation, with the
// constraints l_F*(psi_a) = 0 when the free-jet test does not apply.
TrivectorVerdict variational_test(const EquationSystem& eq, const FormalArgs& args, const DiffPoly& rho,
                                  std::size_t n, const std::vector<CDiffOp>& operators) {
  TrivectorVerdict verdict;
  verdict.frame = args.frame;
  DiffPoly density = eq.reduce(skew(rho, args, n));
  auto dir = eq.evolution_direction();
  bool free_jets = dir.has_value() && !formal_jets_along(density, args, *dir);
  for (const auto& op : operators)
    for (std::size_t i = 0; free_jets && i < op.rows(); ++i)
      for (std::size_t j = 0; free_jets && j < op.cols(); ++j)
        for (const auto& [sigma, c] : op.entry(i, j))
          if (sigma[*dir] > 0) free_jets = false;
  if (!free_jets && !density.is_zero()) {
    std::vector<DepId> formal;
    VectorFunction constraints;
    for (std::size_t a = 0; a < n; ++a) {
      formal.insert(formal.end(), args.slots[a].begin(), args.slots[a].end());
      auto c = apply(eq.adjoint_linearization(), args.vec(a));
      constraints = VectorFunction([&] {
        auto e = constraints.entries();
        e.insert(e.end(), c.begin(), c.end());
        return e;
      }());
    }
    Frame frame = args.frame;
    EquationSystem constrained = eq.with_constraints(frame, formal, constraints);
    density = constrained.reduce(density);
    verdict.constrained = true;
  }
  verdict.exact = free_jets;
  verdict.density = density;
  std::vector<DepId> deps;
  for (auto d : density.dependents()) deps.push_back(d);
  VectorFunction e = euler(density, deps);
  verdict.zero = true;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k].is_zero()) continue;
    if (verdict.zero || e[k].size() < verdict.residual.size()) {
      verdict.residual = e[k];
      verdict.residual_dep = deps[k];
    }
    verdict.zero = false;
  }
  return verdict;
}

}  // namespace

TrivectorVerdict is_zero_trivector(const EquationSystem& eq, const TrivectorRep& t,
                                   const std::vector<CDiffOp>& operators) {
  if (t.args.slots.size() < 3 || t.value.size() != t.args.slots[2].size())
    throw Error(ErrorKind::dimension_mismatch, "trivector needs three formal slots of its length");
  DiffPoly rho = pairing(t.args.vec(2), t.value);
  return variational_test(eq, t.args, rho, 3, operators);
}

TrivectorVerdict equivalent_as_bivectors(const EquationSystem& eq, const CDiffOp& a, const CDiffOp& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw Error(ErrorKind::dimension_mismatch, "compared bivectors must be square of one size");
  FormalArgs args = make_formal_args(eq.frame(), a.cols(), 2);
  const CDiffOp d = a - b;
  const VectorFunction p1 = args.vec(0), p2 = args.vec(1);
  DiffPoly rho = pairing(p2, apply(d, p1));
  return variational_test(eq, args, rho, 2, {d});
}

HamiltonianCheck is_hamiltonian(const EquationSystem& eq, const CDiffOp& a) {
  HamiltonianCheck check{certify_bivector(eq, a), std::nullopt};
  if (check.bivector.certified()) {
    const Bivector& bv = *check.bivector.bivector;
    check.trivector = is_zero_trivector(eq, schouten(bv, bv), {a});
  }
  return check;
}

VectorFunction poisson(const Bivector& a, const GenFn& psi1, const GenFn& psi2) {
  const EquationSystem& eq = a.home();
  if (!(psi1.home() == eq) || !(psi2.home() == eq))
    throw Error(ErrorKind::home_mismatch, "generating functions live on a different equation");
  const VectorFunction phi = apply(a.op(), psi1.psi());
  CDiffOp delta = factor_through_F(eq, apply(eq.linearization(), phi));
  VectorFunction r = evolutionary_apply(phi, eq.unknowns(), psi2.psi()) + apply(adjoint(delta), psi2.psi());
  return eq.reduce(r);
}

MagriCheck verify_magri(const Bivector& a1, const Bivector& a2, const std::vector<GenFn>& chain,
                        bool check_brackets) {
  if (!(a1.home() == a2.home()))
    throw Error(ErrorKind::home_mismatch, "Magri check with bivectors on different equations");
  const EquationSystem& eq = a1.home();
  MagriCheck out;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    VectorFunction r = eq.reduce(apply(a1.op(), chain[i].psi()) - apply(a2.op(), chain[i + 1].psi()));
    if (!r.is_zero()) {
      out.ok = false;
      out.failed_pair = i;
      out.residual = std::move(r);
      return out;
    }
  }
  if (!check_brackets) return out;
  const std::array<const Bivector*, 2> structures{&a1, &a2};
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (std::size_t j = i + 1; j < chain.size(); ++j) {
        VectorFunction b = poisson(*structures[s], chain[i], chain[j]);
        if (!b.is_zero()) {
          out.ok = false;
          out.nonzero_brackets.push_back("A" + std::to_string(s + 1) + "{" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + "} = " + to_string(eq.frame(), b));
        }
      }
  return out;
}

}  // namespace hamcheck
