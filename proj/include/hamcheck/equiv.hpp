#ifndef HAMCHECK_EQUIV_HPP
#define HAMCHECK_EQUIV_HPP

#include <map>
#include <string>
#include <vector>

#include "hamcheck/cdop.hpp"
#include "hamcheck/eqsys.hpp"
#include "hamcheck/multivec.hpp"

namespace hamcheck {

// Two embeddings of one equation related by
//   l1 beta = beta' l2,  l2 alpha = alpha' l1,
//   beta alpha = id + s1 l1,  alpha beta = id + s2 l2.
struct EquivalenceData {
  EquationSystem first;
  EquationSystem second;
  CDiffOp alpha, alphap, beta, betap, s1, s2;
  // Expresses the extra dependents of the second embedding through the first
  // (v -> u_x); used to bring operators from 2 back onto 1.
  std::map<DepId, DiffPoly> substitution;
};

struct RelationResidual {
  std::string relation;
  CDiffOp residual;
};

struct EquivalenceCheck {
  bool ok = true;
  std::vector<RelationResidual> relations;  // all four, in the order above
};

// Relations are decided on the embedding whose unknowns contain the other's;
// the other's equations must reduce to zero there.
EquivalenceCheck verify_equivalence(const EquivalenceData& data);

enum class Direction { first_to_second, second_to_first };

// A2 = alpha A1 alpha'*, or A1 = beta A2 beta'*, reduced on the target.
CDiffOp transport(const EquivalenceData& data, const CDiffOp& a, Direction direction);
// Same, checking that `a` is certified on the source embedding.
CDiffOp transport(const EquivalenceData& data, const Bivector& a, Direction direction);

}  // namespace hamcheck

#endif  // HAMCHECK_EQUIV_HPP
