#ifndef HAMCHECK_EQSYS_HPP
#define HAMCHECK_EQSYS_HPP

#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hamcheck/cdop.hpp"
#include "hamcheck/diffpoly.hpp"

namespace hamcheck {

enum class RankingRule {
  lexicographic,  // precedence-permuted multi-index, then order, then dependent
  orderly,        // order first, then as lexicographic
};

// Strict total order on jet variables, compatible with prolongation.
class Ranking {
 public:
  Ranking() = default;
  // Both lists are highest-precedence first. Dependents missing from the list
  // rank below every listed one, in id order.
  Ranking(std::vector<std::size_t> independent_precedence, std::vector<DepId> dependent_precedence,
          RankingRule rule = RankingRule::lexicographic);

  static Ranking declaration_order(const Frame& frame);

  std::strong_ordering compare(const JetVar& a, const JetVar& b) const;
  bool less(const JetVar& a, const JetVar& b) const { return compare(a, b) < 0; }

  const std::vector<std::size_t>& independent_precedence() const { return indep_; }
  const std::vector<DepId>& dependent_precedence() const { return deps_; }
  RankingRule rule() const { return rule_; }

 private:
  std::size_t dep_position(DepId d) const;

  std::vector<std::size_t> indep_{0, 1, 2, 3};
  std::vector<DepId> deps_;
  RankingRule rule_ = RankingRule::lexicographic;
};

struct SolvedForm {
  JetVar lead;
  // When empty the right-hand side is solved from the equation itself.
  std::optional<DiffPoly> rhs;
};

// F_equation = scale * (lead - rhs)
struct Rule {
  JetVar lead;
  DiffPoly rhs;
  Rational scale;
  std::size_t equation = 0;
};

// Orthonomic rewrite system standing for the infinite prolongation of F = 0.
// Immutable; copies share a thread-safe normal-form cache.
class EquationSystem {
 public:
  static EquationSystem make(Frame frame, std::vector<DepId> unknowns, VectorFunction equations,
                             std::vector<SolvedForm> solved, Ranking ranking,
                             unsigned passivity_depth = 4);

  // Each equation is solved for its highest-ranked jet of an unknown; that jet
  // must occur linearly with a constant coefficient.
  static EquationSystem solve_for_leaders(Frame frame, std::vector<DepId> unknowns,
                                          VectorFunction equations, Ranking ranking,
                                          unsigned passivity_depth = 4);

  const Frame& frame() const;
  const std::vector<DepId>& unknowns() const;
  const VectorFunction& equations() const;
  std::size_t num_equations() const { return equations().size(); }
  const std::vector<Rule>& rules() const;
  const Ranking& ranking() const;
  unsigned passivity_depth() const;

  const CDiffOp& linearization() const;          // l_F over the unknowns
  const CDiffOp& adjoint_linearization() const;  // l_F*

  bool is_reducible(const JetVar& v) const;
  DiffPoly reduce(const DiffPoly& p) const;
  VectorFunction reduce(const VectorFunction& v) const;
  CDiffOp restrict_op(const CDiffOp& op) const;

  // Normal form in which every rewrite of a prolonged leader also inserts the
  // placeholder F_{k,tau} = D_tau(F_k)/scale, truncated at placeholder degree 1.
  DiffPoly reduce_tracking(const DiffPoly& p) const;

  // Every rule is first order in one common independent and each dependent has
  // at most one rule, so internal coordinates form a free jet space.
  bool is_evolutionary() const;
  std::optional<std::size_t> evolution_direction() const;

  // This system plus extra equations in further (formal) dependents over an
  // extended frame; the extra equations are solved for leaders among `extra_unknowns`.
  EquationSystem with_constraints(Frame extended, const std::vector<DepId>& extra_unknowns,
                                  const VectorFunction& extra_equations) const;

  // Same underlying system (copies compare equal).
  bool operator==(const EquationSystem& o) const { return impl_ == o.impl_; }

  struct Impl;

 private:
  explicit EquationSystem(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

VectorFunction symmetry_residual(const EquationSystem& eq, const VectorFunction& phi);
bool is_symmetry(const EquationSystem& eq, const VectorFunction& phi);

VectorFunction genfn_residual(const EquationSystem& eq, const VectorFunction& psi);
bool is_genfn(const EquationSystem& eq, const VectorFunction& psi);

// Delta with G = Delta(F) to first order in F-jets; G must vanish on the
// equation. Result is |G| x num_equations with coefficients in normal form.
CDiffOp factor_through_F(const EquationSystem& eq, const VectorFunction& g);

class GenFn {
 public:
  // Throws certification_failure carrying the residual when psi is not in ker l_E*.
  static GenFn certify(const EquationSystem& eq, VectorFunction psi);

  const VectorFunction& psi() const { return psi_; }
  const EquationSystem& home() const { return home_; }

 private:
  GenFn(EquationSystem home, VectorFunction psi) : home_(std::move(home)), psi_(std::move(psi)) {}
  EquationSystem home_;
  VectorFunction psi_;
};

class ConservedCurrent {
 public:
  // One component per independent (frame order); throws not_conserved.
  static ConservedCurrent certify(const EquationSystem& eq, VectorFunction s);
  const VectorFunction& components() const { return s_; }

 private:
  explicit ConservedCurrent(VectorFunction s) : s_(std::move(s)) {}
  VectorFunction s_;
};

DiffPoly divergence(const VectorFunction& s);

GenFn current_to_genfn(const EquationSystem& eq, const ConservedCurrent& s);

}  // namespace hamcheck

#endif  // HAMCHECK_EQSYS_HPP
