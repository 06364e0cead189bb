#ifndef HAMCHECK_MULTIVEC_HPP
#define HAMCHECK_MULTIVEC_HPP

#include <optional>
#include <vector>

#include "hamcheck/cdop.hpp"
#include "hamcheck/eqsys.hpp"

namespace hamcheck {

// Formal argument slots psi1, psi2, psi3 (each of length l) added to a frame
// as formal dependents.
struct FormalArgs {
  Frame frame;
  std::vector<std::vector<DepId>> slots;

  VectorFunction vec(std::size_t slot) const;
  bool is_formal(DepId d) const;
};

FormalArgs make_formal_args(const Frame& frame, std::size_t length, std::size_t count = 3);

struct BivectorCheck;
class Bivector;
BivectorCheck certify_bivector(const EquationSystem& eq, const CDiffOp& a);

class Bivector {
 public:
  const CDiffOp& op() const { return a_; }
  const EquationSystem& home() const { return home_; }
  const FormalArgs& args() const { return args_; }

  // B(F, psi) = Delta_psi(F): an l x l operator whose coefficients are linear in
  // the jets of formal slot 0.
  const CDiffOp& b() const { return b_; }

  // B*(psi1, psi2), adjoint in the first argument; reduced on the home system.
  VectorFunction b_star(const VectorFunction& psi1, const VectorFunction& psi2) const;

 private:
  friend BivectorCheck certify_bivector(const EquationSystem& eq, const CDiffOp& a);
  Bivector(EquationSystem home, CDiffOp a, CDiffOp b, FormalArgs args)
      : home_(std::move(home)), a_(std::move(a)), b_(std::move(b)), args_(std::move(args)) {}

  EquationSystem home_;
  CDiffOp a_;
  CDiffOp b_;
  FormalArgs args_;
};

struct BivectorCheck {
  std::optional<Bivector> bivector;
  CDiffOp residual;  // restricted l_F A - A* l_F*; zero when certified

  bool certified() const { return bivector.has_value(); }
};

// Requires a square operator whose size is the number of equations, which
// must also equal the number of unknowns.
BivectorCheck certify_bivector(const EquationSystem& eq, const CDiffOp& a);

// Throws certification_failure carrying the rendered residual.
Bivector require_bivector(const EquationSystem& eq, const CDiffOp& a);

// l*_{A,psi2}(psi1) = (l_{A(psi2)})*(psi1): B* for evolution systems.
VectorFunction evolution_b_star(const EquationSystem& eq, const CDiffOp& a, const VectorFunction& psi1,
                                const VectorFunction& psi2);

// Bilinear vector function of formal slots 0 and 1.
struct TrivectorRep {
  FormalArgs args;
  VectorFunction value;
};

TrivectorRep schouten(const Bivector& a1, const Bivector& a2);

struct TrivectorVerdict {
  bool zero = false;
  // A nonzero residual refutes only when the test is exact.
  bool exact = false;
  DiffPoly density;    // skew-symmetrized, reduced
  DiffPoly residual;   // smallest nonzero euler component
  DepId residual_dep = 0;
  bool constrained = false;
  Frame frame;  // frame of density and residual, with the formal slots

  bool refuted() const { return !zero && exact; }
};

// `operators` are the bivectors the trivector was built from; they decide
// whether the free-jet test applies.
TrivectorVerdict is_zero_trivector(const EquationSystem& eq, const TrivectorRep& t,
                                   const std::vector<CDiffOp>& operators = {});

// Same test on the bivector density <psi2, D psi1> - <psi1, D psi2>, D = a - b.
TrivectorVerdict equivalent_as_bivectors(const EquationSystem& eq, const CDiffOp& a, const CDiffOp& b);

struct HamiltonianCheck {
  BivectorCheck bivector;
  std::optional<TrivectorVerdict> trivector;

  bool hamiltonian() const { return bivector.certified() && trivector && trivector->zero; }
};

HamiltonianCheck is_hamiltonian(const EquationSystem& eq, const CDiffOp& a);

// {psi1, psi2}_A = E_{A(psi1)}(psi2) + Delta*(psi2) with l_F(A(psi1)) = Delta(F).
VectorFunction poisson(const Bivector& a, const GenFn& psi1, const GenFn& psi2);

struct MagriChain {
  std::vector<GenFn> entries;
  std::vector<std::optional<DiffPoly>> densities;
};

struct MagriCheck {
  bool ok = true;
  // Index i of the first pair with A1(psi_i) != A2(psi_{i+1}).
  std::optional<std::size_t> failed_pair;
  VectorFunction residual;
  // Brackets {psi_i, psi_j} under each structure that did not vanish.
  std::vector<std::string> nonzero_brackets;
};

MagriCheck verify_magri(const Bivector& a1, const Bivector& a2, const std::vector<GenFn>& chain,
                        bool check_brackets = false);

}  // namespace hamcheck

#endif  // HAMCHECK_MULTIVEC_HPP
