#include "hamcheck/equiv.hpp"

#include <algorithm>

#include "hamcheck/error.hpp"
#include "hamcheck/jetalg.hpp"
#include "hamcheck/render.hpp"

namespace hamcheck {

namespace {

bool contains_all(const std::vector<DepId>& big, const std::vector<DepId>& small) {
  return std::all_of(small.begin(), small.end(),
                     [&](DepId d) { return std::find(big.begin(), big.end(), d) != big.end(); });
}

// The embedding on which both sides can be compared.
const EquationSystem& common_home(const EquivalenceData& d) {
  const EquationSystem* host = nullptr;
  const EquationSystem* guest = nullptr;
  if (contains_all(d.second.unknowns(), d.first.unknowns())) {
    host = &d.second;
    guest = &d.first;
  } else if (contains_all(d.first.unknowns(), d.second.unknowns())) {
    host = &d.first;
    guest = &d.second;
  } else {
    throw Error(ErrorKind::precondition, "neither embedding's unknowns contain the other's");
  }
  VectorFunction r = host->reduce(guest->equations());
  if (!r.is_zero())
    throw Error(ErrorKind::precondition,
                "embeddings describe different equations: " + to_string(host->frame(), r) + " on the host");
  return *host;
}

CDiffOp difference(const CDiffOp& a, const CDiffOp& b, const std::string& relation) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::dimension_mismatch, "relation " + relation + ": sides have different shapes");
  return a - b;
}

CDiffOp checked_compose(const CDiffOp& a, const CDiffOp& b, const std::string& what) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::dimension_mismatch, what + ": inner dimensions differ");
  return compose(a, b);
}

}  // namespace

EquivalenceCheck verify_equivalence(const EquivalenceData& d) {
  const EquationSystem& home = common_home(d);
  const CDiffOp& l1 = d.first.linearization();
  const CDiffOp& l2 = d.second.linearization();
  auto id = [](std::size_t n) { return CDiffOp::identity(n); };
  struct Side {
    std::string name;
    CDiffOp lhs, rhs;
  };
  std::vector<Side> sides;
  sides.push_back({"l1 beta = beta' l2", checked_compose(l1, d.beta, "l1 beta"),
                   checked_compose(d.betap, l2, "beta' l2")});
  sides.push_back({"l2 alpha = alpha' l1", checked_compose(l2, d.alpha, "l2 alpha"),
                   checked_compose(d.alphap, l1, "alpha' l1")});
  CDiffOp ba = checked_compose(d.beta, d.alpha, "beta alpha");
  sides.push_back({"beta alpha = id + s1 l1", ba, id(ba.rows()) + checked_compose(d.s1, l1, "s1 l1")});
  CDiffOp ab = checked_compose(d.alpha, d.beta, "alpha beta");
  sides.push_back({"alpha beta = id + s2 l2", ab, id(ab.rows()) + checked_compose(d.s2, l2, "s2 l2")});
  EquivalenceCheck out;
  for (auto& s : sides) {
    CDiffOp r = home.restrict_op(difference(s.lhs, s.rhs, s.name));
    if (!r.is_zero()) out.ok = false;
    out.relations.push_back({s.name, std::move(r)});
  }
  return out;
}

CDiffOp transport(const EquivalenceData& d, const CDiffOp& a, Direction direction) {
  if (direction == Direction::first_to_second) {
    CDiffOp r = checked_compose(checked_compose(d.alpha, a, "alpha A"), adjoint(d.alphap), "alpha A alpha'*");
    return d.second.restrict_op(r);
  }
  CDiffOp r = checked_compose(checked_compose(d.beta, a, "beta A"), adjoint(d.betap), "beta A beta'*");
  r = d.second.restrict_op(r);
  if (!d.substitution.empty()) {
    r = r.map_coefficients([&](const DiffPoly& p) {
      return substitute(p, [&](const JetVar& v) {
        auto it = d.substitution.find(v.dep);
        if (it == d.substitution.end()) return DiffPoly::var(v);
        return total_derivative(v.idx, it->second);
      });
    });
  }
  return d.first.restrict_op(r);
}

CDiffOp transport(const EquivalenceData& d, const Bivector& a, Direction direction) {
  const EquationSystem& source = direction == Direction::first_to_second ? d.first : d.second;
  if (!(a.home() == source))
    throw Error(ErrorKind::home_mismatch, "transported bivector is not certified on the source embedding");
  return transport(d, a.op(), direction);
}

}  // namespace hamcheck
