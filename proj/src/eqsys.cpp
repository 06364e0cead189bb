#include "hamcheck/eqsys.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <unordered_map>

#include "hamcheck/error.hpp"
#include "hamcheck/kernels.hpp"
#include "hamcheck/render.hpp"

namespace hamcheck {

Ranking::Ranking(std::vector<std::size_t> independent_precedence,
                 std::vector<DepId> dependent_precedence, RankingRule rule)
    : indep_(std::move(independent_precedence)), deps_(std::move(dependent_precedence)), rule_(rule) {
  std::set<std::size_t> seen(indep_.begin(), indep_.end());
  if (seen.size() != indep_.size())
    throw Error(ErrorKind::invalid_frame, "ranking lists an independent twice");
  for (std::size_t i = 0; i < kMaxIndependents; ++i)
    if (!seen.count(i)) indep_.push_back(i);
}

Ranking Ranking::declaration_order(const Frame& frame) {
  std::vector<DepId> deps(frame.num_dependents());
  for (DepId d = 0; d < deps.size(); ++d) deps[d] = d;
  return Ranking({}, deps);
}

std::size_t Ranking::dep_position(DepId d) const {
  auto it = std::find(deps_.begin(), deps_.end(), d);
  if (it != deps_.end()) return static_cast<std::size_t>(it - deps_.begin());
  return deps_.size() + d;
}

std::strong_ordering Ranking::compare(const JetVar& a, const JetVar& b) const {
  auto lex = [&]() -> std::strong_ordering {
    for (auto i : indep_)
      if (auto c = a.idx[i] <=> b.idx[i]; c != 0) return c;
    return std::strong_ordering::equal;
  };
  if (rule_ == RankingRule::orderly) {
    if (auto c = a.idx.order() <=> b.idx.order(); c != 0) return c;
    if (auto c = lex(); c != 0) return c;
  } else {
    if (auto c = lex(); c != 0) return c;
    if (auto c = a.idx.order() <=> b.idx.order(); c != 0) return c;
  }
  // Earlier in the precedence list ranks higher.
  return dep_position(b.dep) <=> dep_position(a.dep);
}

namespace {

bool has_marker(DepId d) { return is_marker(d); }

JetVar marker(std::size_t equation) { return JetVar{kMarkerBase + static_cast<DepId>(equation), {}}; }

// Memoized normal forms of single jet variables under a fixed rule set.
class Reducer {
 public:
  Reducer(const std::vector<Rule>* rules, bool tracking) : rules_(rules), tracking_(tracking) {
    for (std::size_t k = 0; k < rules_->size(); ++k) by_dep_[(*rules_)[k].lead.dep].push_back(k);
  }

  const Rule* rule_for(const JetVar& v) const {
    auto it = by_dep_.find(v.dep);
    if (it == by_dep_.end()) return nullptr;
    for (auto k : it->second)
      if ((*rules_)[k].lead.idx.divides(v.idx)) return &(*rules_)[k];
    return nullptr;
  }

  DiffPoly reduce(const DiffPoly& p) const {
    bool any = false;
    for (const auto& v : p.variables())
      if (rule_for(v)) {
        any = true;
        break;
      }
    if (!any) return p;
    return substitute(
        p, [this](const JetVar& v) { return normal_form(v); },
        tracking_ ? std::function<void(DiffPoly&)>(truncate) : std::function<void(DiffPoly&)>{});
  }

  DiffPoly normal_form(const JetVar& v) const {
    const Rule* rule = rule_for(v);
    if (!rule) return DiffPoly::var(v);
    {
      std::shared_lock lock(mu_);
      if (auto it = memo_.find(v); it != memo_.end()) return it->second;
    }
    DiffPoly result;
    if (v.idx == rule->lead.idx) {
      DiffPoly rhs = rule->rhs;
      if (tracking_) rhs += DiffPoly::var(marker(rule->equation)) * Rational(1 / rule->scale);
      result = reduce(rhs);
    } else {
      std::size_t i = 0;
      while (v.idx[i] <= rule->lead.idx[i]) ++i;
      JetVar prev{v.dep, v.idx - MultiIndex::unit(i)};
      result = reduce(total_derivative(i, normal_form(prev)));
    }
    if (tracking_) truncate(result);
    std::unique_lock lock(mu_);
    return memo_.emplace(v, std::move(result)).first->second;
  }

  static void truncate(DiffPoly& p) {
    if (p.degree_in(has_marker) > 1) p = p.filter_degree(has_marker, 0, 1);
  }

 private:
  const std::vector<Rule>* rules_;
  bool tracking_;
  std::unordered_map<DepId, std::vector<std::size_t>> by_dep_;
  mutable std::shared_mutex mu_;
  mutable std::map<JetVar, DiffPoly> memo_;
};

}  // namespace

struct EquationSystem::Impl {
  Frame frame;
  std::vector<DepId> unknowns;
  VectorFunction equations;
  std::vector<Rule> rules;
  Ranking ranking;
  unsigned passivity_depth = 4;

  std::unique_ptr<Reducer> plain;
  std::unique_ptr<Reducer> tracking;

  mutable std::once_flag lin_once;
  mutable std::unique_ptr<CDiffOp> lin;
  mutable std::unique_ptr<CDiffOp> lin_adj;

  void build_reducers() {
    plain = std::make_unique<Reducer>(&rules, false);
    tracking = std::make_unique<Reducer>(&rules, true);
  }

  void ensure_linearization() const {
    std::call_once(lin_once, [this] {
      lin = std::make_unique<CDiffOp>(linearize(equations, unknowns));
      lin_adj = std::make_unique<CDiffOp>(adjoint(*lin));
    });
  }
};

namespace {

std::string render(const Frame& f, const JetVar& v) { return to_string(f, v); }

void validate_rules(const EquationSystem::Impl& s) {
  const auto& rules = s.rules;
  for (std::size_t a = 0; a < rules.size(); ++a) {
    const auto& ra = rules[a];
    for (const auto& v : ra.rhs.variables()) {
      if (is_marker(v.dep)) continue;
      if (!s.ranking.less(v, ra.lead))
        throw Error(ErrorKind::non_orthonomic,
                    "leader " + render(s.frame, ra.lead) + " is not maximal: right-hand side contains " +
                        render(s.frame, v));
    }
    for (std::size_t b = 0; b < rules.size(); ++b) {
      if (a == b) continue;
      const auto& rb = rules[b];
      if (ra.lead.dep == rb.lead.dep && rb.lead.idx.divides(ra.lead.idx))
        throw Error(ErrorKind::non_orthonomic,
                    "leader " + render(s.frame, ra.lead) + " is reducible by leader " +
                        render(s.frame, rb.lead));
    }
  }
}

// Cross-derivative compatibility for every pair of rules on one dependent,
// checked at the least common prolongation and its prolongations of order < depth.
void check_passivity(const EquationSystem::Impl& s) {
  if (s.passivity_depth == 0) return;
  const auto& rules = s.rules;
  const std::size_t n = s.frame.num_independents();
  for (std::size_t a = 0; a < rules.size(); ++a) {
    for (std::size_t b = a + 1; b < rules.size(); ++b) {
      const auto& ra = rules[a];
      const auto& rb = rules[b];
      if (ra.lead.dep != rb.lead.dep) continue;
      const MultiIndex common = MultiIndex::lcm(ra.lead.idx, rb.lead.idx);
      for (const auto& tau : indices_up_to(n, s.passivity_depth - 1)) {
        const MultiIndex target = common + tau;
        DiffPoly via_a = s.plain->reduce(total_derivative(target - ra.lead.idx, ra.rhs));
        DiffPoly via_b = s.plain->reduce(total_derivative(target - rb.lead.idx, rb.rhs));
        DiffPoly residual = via_a - via_b;
        if (!residual.is_zero())
          throw Error(ErrorKind::passivity_failure,
                      "integrability condition at " + render(s.frame, JetVar{ra.lead.dep, target}) +
                          " (prolongation order " + std::to_string(tau.order()) +
                          ") leaves residual " + to_string(s.frame, residual));
      }
    }
  }
}

Rule rule_from(const Frame& frame, const DiffPoly& f, std::size_t k, const JetVar& lead,
               const std::optional<DiffPoly>& given_rhs) {
  DiffPoly coef = f.partial(lead);
  if (!coef.is_constant() || coef.is_zero())
    throw Error(ErrorKind::mismatched_solved_form,
                "equation " + std::to_string(k + 1) + " is not linear with constant coefficient in " +
                    to_string(frame, lead));
  Rational scale = coef.constant_term();
  DiffPoly rhs = DiffPoly::var(lead) - f * Rational(1 / scale);
  if (rhs.variables().count(lead))
    throw Error(ErrorKind::mismatched_solved_form,
                "equation " + std::to_string(k + 1) + " is nonlinear in " + to_string(frame, lead));
  if (given_rhs && !(f - scale * (DiffPoly::var(lead) - *given_rhs)).is_zero())
    throw Error(ErrorKind::mismatched_solved_form,
                "solved form for " + to_string(frame, lead) + " does not match equation " +
                    std::to_string(k + 1));
  return Rule{lead, std::move(rhs), scale, k};
}

std::shared_ptr<EquationSystem::Impl> build(Frame frame, std::vector<DepId> unknowns,
                                            VectorFunction equations, std::vector<Rule> rules,
                                            Ranking ranking, unsigned depth) {
  auto impl = std::make_shared<EquationSystem::Impl>();
  impl->frame = std::move(frame);
  impl->unknowns = std::move(unknowns);
  impl->equations = std::move(equations);
  impl->rules = std::move(rules);
  impl->ranking = std::move(ranking);
  impl->passivity_depth = depth;
  impl->build_reducers();
  validate_rules(*impl);
  check_passivity(*impl);
  return impl;
}

JetVar highest_jet(const Frame& frame, const DiffPoly& f, const std::vector<DepId>& deps,
                   const Ranking& ranking, std::size_t k, ErrorKind kind) {
  std::optional<JetVar> best;
  for (const auto& v : f.variables()) {
    if (std::find(deps.begin(), deps.end(), v.dep) == deps.end()) continue;
    if (!best || ranking.less(*best, v)) best = v;
  }
  if (!best)
    throw Error(kind, "equation " + std::to_string(k + 1) + " involves no unknown to solve for");
  DiffPoly coef = f.partial(*best);
  if (!coef.is_constant() || f.partial(*best).partial(*best).size() != 0)
    throw Error(kind, "highest jet " + to_string(frame, *best) + " of equation " +
                          std::to_string(k + 1) + " does not occur linearly with constant coefficient");
  return *best;
}

}  // namespace

EquationSystem EquationSystem::make(Frame frame, std::vector<DepId> unknowns, VectorFunction equations,
                                    std::vector<SolvedForm> solved, Ranking ranking,
                                    unsigned passivity_depth) {
  if (solved.size() != equations.size())
    throw Error(ErrorKind::mismatched_solved_form,
                "need one solved form per equation (" + std::to_string(equations.size()) + ")");
  if (unknowns.empty()) throw Error(ErrorKind::invalid_frame, "system has no unknowns");
  std::vector<Rule> rules;
  for (std::size_t k = 0; k < solved.size(); ++k) {
    const auto& lead = solved[k].lead;
    if (std::find(unknowns.begin(), unknowns.end(), lead.dep) == unknowns.end())
      throw Error(ErrorKind::non_orthonomic, "leader " + to_string(frame, lead) + " is not a jet of an unknown");
    rules.push_back(rule_from(frame, equations[k], k, lead, solved[k].rhs));
  }
  return EquationSystem(build(std::move(frame), std::move(unknowns), std::move(equations),
                              std::move(rules), std::move(ranking), passivity_depth));
}

EquationSystem EquationSystem::solve_for_leaders(Frame frame, std::vector<DepId> unknowns,
                                                 VectorFunction equations, Ranking ranking,
                                                 unsigned passivity_depth) {
  std::vector<SolvedForm> solved;
  for (std::size_t k = 0; k < equations.size(); ++k)
    solved.push_back({highest_jet(frame, equations[k], unknowns, ranking, k, ErrorKind::non_orthonomic),
                      std::nullopt});
  return make(std::move(frame), std::move(unknowns), std::move(equations), std::move(solved),
              std::move(ranking), passivity_depth);
}

const Frame& EquationSystem::frame() const { return impl_->frame; }
const std::vector<DepId>& EquationSystem::unknowns() const { return impl_->unknowns; }
const VectorFunction& EquationSystem::equations() const { return impl_->equations; }
const std::vector<Rule>& EquationSystem::rules() const { return impl_->rules; }
const Ranking& EquationSystem::ranking() const { return impl_->ranking; }
unsigned EquationSystem::passivity_depth() const { return impl_->passivity_depth; }

const CDiffOp& EquationSystem::linearization() const {
  impl_->ensure_linearization();
  return *impl_->lin;
}

const CDiffOp& EquationSystem::adjoint_linearization() const {
  impl_->ensure_linearization();
  return *impl_->lin_adj;
}

bool EquationSystem::is_reducible(const JetVar& v) const { return impl_->plain->rule_for(v) != nullptr; }

DiffPoly EquationSystem::reduce(const DiffPoly& p) const { return impl_->plain->reduce(p); }

VectorFunction EquationSystem::reduce(const VectorFunction& v) const {
  auto out = kernels::map(v.entries(), [this](const DiffPoly& p) { return reduce(p); });
  return VectorFunction(std::move(out));
}

CDiffOp EquationSystem::restrict_op(const CDiffOp& op) const {
  auto coefs = op.coefficients();
  auto reduced = kernels::map(coefs, [this](const DiffPoly& p) { return reduce(p); });
  CDiffOp r(op.rows(), op.cols());
  std::size_t k = 0;
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = 0; j < op.cols(); ++j)
      for (const auto& [sigma, a] : op.entry(i, j)) r.add(i, j, sigma, reduced[k++]);
  return r;
}

DiffPoly EquationSystem::reduce_tracking(const DiffPoly& p) const { return impl_->tracking->reduce(p); }

std::optional<std::size_t> EquationSystem::evolution_direction() const {
  const auto& rules = impl_->rules;
  if (rules.empty()) return std::nullopt;
  std::optional<std::size_t> dir;
  std::set<DepId> seen;
  for (const auto& r : rules) {
    if (r.lead.idx.order() != 1 || !seen.insert(r.lead.dep).second) return std::nullopt;
    std::size_t i = 0;
    while (r.lead.idx[i] == 0) ++i;
    if (dir && *dir != i) return std::nullopt;
    dir = i;
  }
  return dir;
}

bool EquationSystem::is_evolutionary() const { return evolution_direction().has_value(); }

EquationSystem EquationSystem::with_constraints(Frame extended, const std::vector<DepId>& extra_unknowns,
                                                const VectorFunction& extra_equations) const {
  std::vector<Rule> rules = impl_->rules;
  VectorFunction equations(impl_->equations.size() + extra_equations.size());
  for (std::size_t k = 0; k < impl_->equations.size(); ++k) equations[k] = impl_->equations[k];
  for (std::size_t k = 0; k < extra_equations.size(); ++k) {
    const std::size_t idx = impl_->equations.size() + k;
    DiffPoly g = reduce(extra_equations[k]);
    equations[idx] = g;
    if (g.is_zero()) continue;
    JetVar lead = highest_jet(extended, g, extra_unknowns, impl_->ranking, idx,
                              ErrorKind::constraint_not_orthonomic);
    rules.push_back(rule_from(extended, g, idx, lead, std::nullopt));
  }
  std::vector<DepId> unknowns = impl_->unknowns;
  unknowns.insert(unknowns.end(), extra_unknowns.begin(), extra_unknowns.end());
  try {
    return EquationSystem(build(std::move(extended), std::move(unknowns), std::move(equations),
                                std::move(rules), impl_->ranking, impl_->passivity_depth));
  } catch (const Error& e) {
    throw Error(ErrorKind::constraint_not_orthonomic, e.what());
  }
}

VectorFunction symmetry_residual(const EquationSystem& eq, const VectorFunction& phi) {
  return eq.reduce(apply(eq.linearization(), phi));
}

bool is_symmetry(const EquationSystem& eq, const VectorFunction& phi) {
  return symmetry_residual(eq, phi).is_zero();
}

VectorFunction genfn_residual(const EquationSystem& eq, const VectorFunction& psi) {
  return eq.reduce(apply(eq.adjoint_linearization(), psi));
}

bool is_genfn(const EquationSystem& eq, const VectorFunction& psi) {
  return genfn_residual(eq, psi).is_zero();
}

CDiffOp factor_through_F(const EquationSystem& eq, const VectorFunction& g) {
  CDiffOp delta(std::max<std::size_t>(g.size(), 1), eq.num_equations());
  auto tracked = kernels::map(g.entries(), [&](const DiffPoly& p) { return eq.reduce_tracking(p); });
  for (std::size_t row = 0; row < g.size(); ++row) {
    for (const auto& [m, c] : tracked[row].terms()) {
      const Monomial::Factor* mark = nullptr;
      for (const auto& f : m.factors())
        if (is_marker(f.first.dep)) mark = &f;
      if (!mark)
        throw Error(ErrorKind::not_on_equation,
                    "expression does not vanish on the equation: component " + std::to_string(row + 1) +
                        " reduces to " + to_string(eq.frame(), tracked[row].filter_degree(has_marker, 0, 0)));
      const JetVar phi = mark->first;
      delta.add(row, phi.dep - kMarkerBase, phi.idx, DiffPoly::term(c, m.without_one(phi)));
    }
  }
  return delta;
}

GenFn GenFn::certify(const EquationSystem& eq, VectorFunction psi) {
  if (psi.size() != eq.num_equations())
    throw Error(ErrorKind::dimension_mismatch, "generating function needs one entry per equation");
  auto residual = genfn_residual(eq, psi);
  if (!residual.is_zero())
    throw Error(ErrorKind::certification_failure,
                "not a generating function: l_E*(psi) = " + to_string(eq.frame(), residual));
  return GenFn(eq, std::move(psi));
}

DiffPoly divergence(const VectorFunction& s) {
  DiffPoly d;
  for (std::size_t i = 0; i < s.size(); ++i) d += total_derivative(i, s[i]);
  return d;
}

ConservedCurrent ConservedCurrent::certify(const EquationSystem& eq, VectorFunction s) {
  if (s.size() != eq.frame().num_independents())
    throw Error(ErrorKind::dimension_mismatch, "current needs one component per independent");
  DiffPoly r = eq.reduce(divergence(s));
  if (!r.is_zero())
    throw Error(ErrorKind::not_conserved, "divergence reduces to " + to_string(eq.frame(), r));
  return ConservedCurrent(std::move(s));
}

GenFn current_to_genfn(const EquationSystem& eq, const ConservedCurrent& s) {
  CDiffOp delta = factor_through_F(eq, VectorFunction{divergence(s.components())});
  VectorFunction psi = eq.reduce(apply(adjoint(delta), VectorFunction{DiffPoly(1)}));
  return GenFn::certify(eq, std::move(psi));
}

}  // namespace hamcheck
