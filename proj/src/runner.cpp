#include "hamcheck/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "hamcheck/equiv.hpp"
#include "hamcheck/error.hpp"
#include "hamcheck/jetalg.hpp"
#include "hamcheck/kernels.hpp"
#include "hamcheck/kuper.hpp"
#include "hamcheck/multivec.hpp"
#include "hamcheck/render.hpp"

namespace hamcheck {

using nlohmann::ordered_json;
using dsl::TaskKind;

const char* to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::ok: return "ok";
    case TaskStatus::fail: return "fail";
    case TaskStatus::residual: return "residual";
  }
  return "?";
}

bool RunReport::all_ok() const {
  for (const auto& t : tasks)
    if (t.status != TaskStatus::ok) return false;
  return true;
}

std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

class TaskRunner {
 public:
  TaskRunner(const dsl::Program& prog, const dsl::TaskSpec& spec, TaskResult& out)
      : prog_(prog), spec_(spec), out_(out) {}

  void run() {
    switch (spec_.kind) {
      case TaskKind::reduce: return reduce();
      case TaskKind::symmetry: return symmetry();
      case TaskKind::genfn: return genfn();
      case TaskKind::bivector: return bivector();
      case TaskKind::schouten: return schouten_task();
      case TaskKind::hamiltonian: return hamiltonian();
      case TaskKind::poisson: return poisson_task();
      case TaskKind::magri: return magri();
      case TaskKind::equivalence: return equivalence();
      case TaskKind::transport: return transport_task();
      case TaskKind::deform: return deform_task();
      case TaskKind::lift: return lift();
    }
  }

 private:
  const Frame& frame() const { return prog_.frame; }
  std::string str(const DiffPoly& p) const { return to_string(frame(), p); }
  std::string str(const VectorFunction& v) const { return to_string(frame(), v); }
  std::string str(const CDiffOp& a) const { return to_string(frame(), a); }

  void set(TaskStatus s, std::string summary) {
    out_.status = s;
    out_.summary = std::move(summary);
  }

  const EquationSystem& equation(const std::string& name) const {
    const dsl::EquationDecl* d = prog_.find_equation(name);
    if (!d) throw Error(ErrorKind::precondition, "unknown equation '" + name + "'");
    if (d->error) throw *d->error;
    return *d->system;
  }

  Bivector certified(const EquationSystem& eq, const dsl::NamedOperator& a, const std::string& key) {
    BivectorCheck c = certify_bivector(eq, a.op);
    out_.details[key] = c.certified() ? "certified" : "not a bivector";
    if (!c.certified()) {
      out_.details[key + "_residual"] = str(c.residual);
      throw Error(ErrorKind::certification_failure, a.name + " is not a bivector: residual " + str(c.residual));
    }
    return std::move(*c.bivector);
  }

  GenFn genfn_of(const EquationSystem& eq, const VectorFunction& psi) {
    VectorFunction r = genfn_residual(eq, psi);
    if (!r.is_zero())
      throw Error(ErrorKind::certification_failure,
                  str(psi) + " is not a generating function: residual " + str(r));
    return GenFn::certify(eq, psi);
  }

  ordered_json verdict_json(const TrivectorVerdict& v) const {
    ordered_json j = ordered_json::object();
    j["zero"] = v.zero;
    j["exact"] = v.exact;
    j["constrained"] = v.constrained;
    if (!v.zero) {
      j["residual"] = to_string(v.frame, v.residual);
      j["residual_wrt"] = v.frame.dependent(v.residual_dep).name;
    }
    return j;
  }

  void verdict_status(const TrivectorVerdict& v, const std::string& what) {
    if (v.zero) set(TaskStatus::ok, what + " vanishes");
    else if (v.exact) set(TaskStatus::fail, what + " is nonzero");
    else set(TaskStatus::residual, what + " not shown to vanish");
  }

  // Length-1 vectors print as their entry.
  std::string flat(const VectorFunction& v) const { return v.size() == 1 ? str(v[0]) : str(v); }

  void reduce() {
    const EquationSystem& eq = equation(spec_.target);
    const VectorFunction& in = spec_.functions[0];
    VectorFunction nf = eq.reduce(in);
    out_.details["input"] = flat(in);
    out_.details["normal_form"] = flat(nf);
    if (spec_.functions.size() < 2) return set(TaskStatus::ok, "reduced");
    const VectorFunction& want = spec_.functions[1];
    out_.details["expected"] = flat(want);
    if (want.size() != nf.size()) return set(TaskStatus::fail, "expected value has a different length");
    VectorFunction diff = nf - eq.reduce(want);
    if (diff.is_zero()) return set(TaskStatus::ok, "normal form matches");
    out_.details["difference"] = flat(diff);
    set(TaskStatus::fail, "normal form differs from the expected value");
  }

  void symmetry() {
    const EquationSystem& eq = equation(spec_.target);
    VectorFunction r = symmetry_residual(eq, spec_.functions[0]);
    out_.details["residual"] = str(r);
    if (r.is_zero()) set(TaskStatus::ok, "symmetry");
    else set(TaskStatus::fail, "not a symmetry");
  }

  void genfn() {
    const EquationSystem& eq = equation(spec_.target);
    VectorFunction r = genfn_residual(eq, spec_.functions[0]);
    out_.details["residual"] = str(r);
    if (r.is_zero()) set(TaskStatus::ok, "generating function");
    else set(TaskStatus::fail, "not a generating function");
  }

  void bivector() {
    const EquationSystem& eq = equation(spec_.target);
    const auto& a = spec_.operators[0];
    BivectorCheck c = certify_bivector(eq, a.op);
    out_.details["operator"] = str(a.op);
    out_.details["residual"] = str(c.residual);
    if (!c.certified()) return set(TaskStatus::fail, "not a bivector");
    out_.details["B"] = to_string(c.bivector->args().frame, c.bivector->b());
    set(TaskStatus::ok, "bivector");
  }

  void schouten_task() {
    const EquationSystem& eq = equation(spec_.target);
    Bivector a1 = certified(eq, spec_.operators[0], "first");
    Bivector a2 = certified(eq, spec_.operators[1], "second");
    TrivectorVerdict v = is_zero_trivector(eq, schouten(a1, a2), {a1.op(), a2.op()});
    out_.details["trivector"] = verdict_json(v);
    verdict_status(v, "Schouten bracket");
  }

  void hamiltonian() {
    const EquationSystem& eq = equation(spec_.target);
    HamiltonianCheck h = is_hamiltonian(eq, spec_.operators[0].op);
    out_.details["bivector"] = h.bivector.certified() ? "certified" : "not a bivector";
    if (!h.bivector.certified()) {
      out_.details["residual"] = str(h.bivector.residual);
      return set(TaskStatus::fail, "not a bivector");
    }
    out_.details["trivector"] = verdict_json(*h.trivector);
    verdict_status(*h.trivector, "[A, A]");
  }

  void poisson_task() {
    const EquationSystem& eq = equation(spec_.target);
    Bivector a = certified(eq, spec_.operators[0], "bivector");
    GenFn p1 = genfn_of(eq, spec_.functions[0]);
    GenFn p2 = genfn_of(eq, spec_.functions[1]);
    VectorFunction bracket = poisson(a, p1, p2);
    out_.details["bracket"] = str(bracket);
    VectorFunction r = genfn_residual(eq, bracket);
    out_.details["genfn_residual"] = str(r);
    if (r.is_zero()) set(TaskStatus::ok, "bracket is a generating function");
    else set(TaskStatus::fail, "bracket is not a generating function");
  }

  void magri() {
    const EquationSystem& eq = equation(spec_.target);
    Bivector a1 = certified(eq, spec_.operators[0], "first");
    Bivector a2 = certified(eq, spec_.operators[1], "second");
    std::vector<GenFn> chain;
    for (const auto& psi : spec_.chain->entries) chain.push_back(genfn_of(eq, psi));
    MagriCheck m = verify_magri(a1, a2, chain, true);
    out_.details["length"] = chain.size();
    if (m.failed_pair) {
      out_.details["failed_pair"] = *m.failed_pair + 1;
      out_.details["residual"] = str(m.residual);
    }
    out_.details["nonzero_brackets"] = m.nonzero_brackets;
    if (m.ok) set(TaskStatus::ok, "Magri chain");
    else if (m.failed_pair) set(TaskStatus::fail, "A1(psi_i) != A2(psi_{i+1})");
    else set(TaskStatus::fail, "chain brackets do not vanish");
  }

  EquivalenceData equivalence_data(const dsl::EquivalenceDecl& d) const {
    return EquivalenceData{equation(d.first), equation(d.second), d.alpha, d.alphap, d.beta,
                           d.betap,           d.s1,               d.s2,    d.substitution};
  }

  const dsl::EquivalenceDecl& equivalence_decl() const {
    const dsl::EquivalenceDecl* d = prog_.find_equivalence(spec_.target);
    if (!d) throw Error(ErrorKind::precondition, "unknown equivalence '" + spec_.target + "'");
    return *d;
  }

  void equivalence() {
    EquivalenceCheck c = verify_equivalence(equivalence_data(equivalence_decl()));
    ordered_json rel = ordered_json::object();
    for (const auto& r : c.relations) rel[r.relation] = str(r.residual);
    out_.details["relations"] = rel;
    if (c.ok) set(TaskStatus::ok, "all relations hold");
    else set(TaskStatus::fail, "some relations fail");
  }

  void transport_task() {
    const dsl::EquivalenceDecl& decl = equivalence_decl();
    EquivalenceData data = equivalence_data(decl);
    const bool forward = spec_.direction == 12;
    const EquationSystem& source = forward ? data.first : data.second;
    const EquationSystem& target = forward ? data.second : data.first;
    Bivector a = certified(source, spec_.operators[0], "source");
    CDiffOp t = transport(data, a, forward ? Direction::first_to_second : Direction::second_to_first);
    out_.details["direction"] = forward ? "1->2" : "2->1";
    out_.details["transported"] = str(t);
    BivectorCheck c = certify_bivector(target, t);
    out_.details["target"] = c.certified() ? "certified" : "not a bivector";
    if (!c.certified()) {
      out_.details["target_residual"] = str(c.residual);
      return set(TaskStatus::fail, "transported operator is not a bivector");
    }
    if (spec_.operators.size() > 1) {
      const auto& cmp = spec_.operators[1];
      TrivectorVerdict v = equivalent_as_bivectors(target, t, cmp.op);
      ordered_json j = verdict_json(v);
      j["against"] = cmp.name;
      out_.details["comparison"] = j;
    }
    set(TaskStatus::ok, "transported operator is a bivector");
  }

  DeformedSystem deformation(ordered_json& j) {
    const dsl::DeformationDecl* d = prog_.find_deformation(spec_.target);
    if (!d) throw Error(ErrorKind::precondition, "unknown deformation '" + spec_.target + "'");
    const EquationSystem& base = equation(d->base);
    Bivector a1 = certified(base, {d->a1_name, d->a1}, "A1");
    Bivector a2 = certified(base, {d->a2_name, d->a2}, "A2");
    DeformedSystem def = deform(a1, a2, d->fresh, d->ranking);
    ordered_json eqs = ordered_json::array();
    for (const auto& r : def.system.rules())
      eqs.push_back(to_string(frame(), r.lead) + " = " + str(r.rhs));
    j["equations"] = eqs;
    j["L"] = str(def.l);
    j["tilde1"] = str(def.tilde1);
    j["tilde2"] = str(def.tilde2);
    j["tilde1_status"] = def.check1.certified() ? "certified" : "not a bivector";
    j["tilde2_status"] = def.check2.certified() ? "certified" : "not a bivector";
    if (!def.check1.certified()) j["tilde1_residual"] = str(def.check1.residual);
    if (!def.check2.certified()) j["tilde2_residual"] = str(def.check2.residual);
    return def;
  }

  void deform_task() {
    DeformedSystem def = deformation(out_.details);
    if (!def.certified()) return set(TaskStatus::fail, "deformed operators are not bivectors");
    if (!spec_.with_schouten) return set(TaskStatus::ok, "deformed operators are bivectors");
    const Bivector& b1 = *def.check1.bivector;
    const Bivector& b2 = *def.check2.bivector;
    const std::vector<CDiffOp> ops{b1.op(), b2.op()};
    ordered_json sch = ordered_json::object();
    bool zero = true, refuted = false;
    const std::pair<const char*, std::pair<const Bivector*, const Bivector*>> pairs[] = {
        {"[A1, A1]", {&b1, &b1}}, {"[A1, A2]", {&b1, &b2}}, {"[A2, A2]", {&b2, &b2}}};
    for (const auto& [name, p] : pairs) {
      TrivectorVerdict v = is_zero_trivector(def.system, schouten(*p.first, *p.second), ops);
      sch[name] = verdict_json(v);
      zero = zero && v.zero;
      refuted = refuted || v.refuted();
    }
    out_.details["schouten"] = sch;
    if (zero) set(TaskStatus::ok, "deformed pair is compatible");
    else if (refuted) set(TaskStatus::fail, "deformed pair is not compatible");
    else set(TaskStatus::residual, "compatibility not shown");
  }

  void lift() {
    DeformedSystem def = deformation(out_.details);
    std::vector<GenFn> chain;
    for (const auto& psi : spec_.chain->entries) chain.push_back(genfn_of(def.base, psi));
    LiftedChain lc = lift_hierarchy(def, chain);
    ordered_json entries = ordered_json::array();
    for (const auto& e : lc.entries) {
      ordered_json j = ordered_json::object();
      j["psi"] = str(e.psi);
      j["genfn"] = e.genfn;
      if (!e.genfn) j["residual"] = str(e.genfn_residual);
      entries.push_back(j);
    }
    out_.details["lifted"] = entries;
    if (lc.magri) out_.details["magri"] = lc.magri->ok;
    bool conserved = true;
    ordered_json cons = ordered_json::array();
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      ordered_json j = ordered_json::object();
      try {
        ConservationCheck c = check_conserved(def, chain[i], chain[i + 1]);
        j["conserved"] = c.conserved;
        if (!c.conserved) j["residual"] = str(c.residual);
        conserved = conserved && c.conserved;
      } catch (const Error& e) {
        j["skipped"] = e.what();
      }
      cons.push_back(j);
    }
    out_.details["conservation"] = cons;
    if (lc.ok() && conserved && def.certified()) set(TaskStatus::ok, "lifted chain");
    else set(TaskStatus::fail, "lifted chain fails");
  }

  const dsl::Program& prog_;
  const dsl::TaskSpec& spec_;
  TaskResult& out_;
};

}  // namespace

TaskResult run_task(const dsl::Program& program, const dsl::TaskSpec& task) {
  TaskResult out;
  out.kind = task.kind;
  out.label = task.label;
  out.pos = task.pos;
  const auto start = std::chrono::steady_clock::now();
  try {
    TaskRunner(program, task, out).run();
  } catch (const Error& e) {
    out.status = TaskStatus::fail;
    out.error_kind = to_string(e.kind());
    out.summary = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport run_program(const dsl::Program& program, std::string_view source) {
  if (const char* env = std::getenv("HAMCHECK_THREADS")) kernels::set_max_threads(std::atoi(env));
  RunReport report;
  report.input_digest = input_digest(source);
  report.passivity_depth = program.passivity_depth;
  report.tasks.resize(program.tasks.size());
  kernels::for_each_index(program.tasks.size(),
                          [&](std::size_t i) { report.tasks[i] = run_task(program, program.tasks[i]); });
  return report;
}

}  // namespace hamcheck
