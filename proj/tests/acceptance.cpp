#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamcheck/hamcheck.hpp"

using namespace hamcheck;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Fx {
  Frame f{{"x", "t"}, {{"u"}, {"v"}, {"w"}, {"m"}}};

  DiffPoly P(std::string_view s) const { return dsl::parse_poly(f, s); }
  CDiffOp O(std::string_view s) const { return dsl::parse_operator(f, s); }
  VectorFunction V(std::string_view s) const { return dsl::parse_vector(f, s); }
  JetVar J(const std::string& s) const { return *f.parse_jet(s); }
  DepId dep(const std::string& s) const { return *f.find_dependent(s); }
  template <class T>
  std::string S(const T& v) const {
    return to_string(f, v);
  }
};

const char* kA2 = "Dx^3 + 4*u*Dx + 2*u_x";
const char* kM1 = "[[0, -1, 0], [1, 0, -6*u], [0, 6*u, Dt]]";
const char* kM2 = "[[0, -2*u, -Dt - 2*v], [2*u, Dt, -12*u^2 - 2*w], [-Dt + 2*v, 12*u^2 + 2*w, 8*u*Dt + 4*u_t]]";

EquationSystem kdv(const Fx& x) {
  return EquationSystem::make(x.f, {0}, {x.P("u_t - u_xxx - 6*u*u_x")}, {{x.J("u_t"), x.P("u_xxx + 6*u*u_x")}},
                              Ranking({1, 0}, {0}));
}

EquationSystem kdv3(const Fx& x) {
  return EquationSystem::make(x.f, {0, 1, 2}, {x.P("u_x - v"), x.P("v_x - w"), x.P("w_x - u_t + 6*u*v")},
                              {{x.J("u_x"), x.P("v")}, {x.J("v_x"), x.P("w")}, {x.J("w_x"), x.P("u_t - 6*u*v")}},
                              Ranking({0, 1}, {0, 1, 2}));
}

EquationSystem ch(const Fx& x) {
  return EquationSystem::make(x.f, {0}, {x.P("u_t - u_txx - u*u_xxx - 2*u_x*u_xx + 3*u*u_x")},
                              {{x.J("u_txx"), std::nullopt}}, Ranking({1, 0}, {0}));
}

EquationSystem ch2(const Fx& x) {
  const DepId m = x.dep("m");
  return EquationSystem::make(x.f, {0, m}, {x.P("m_t + u*m_x + 2*u_x*m"), x.P("m - u + u_xx")},
                              {{x.J("m_t"), std::nullopt}, {x.J("u_xx"), std::nullopt}}, Ranking({1, 0}, {0, m}));
}

EquivalenceData kdv_equivalence(const Fx& x) {
  EquivalenceData d{kdv(x),
                    kdv3(x),
                    x.O("[1, Dx, Dx^2]"),
                    x.O("[0, 0, -1]"),
                    x.O("[[1, 0, 0]]"),
                    x.O("[[-Dx^2 - 6*u, -Dx, -1]]"),
                    x.O("0"),
                    x.O("[[0, 0, 0], [1, 0, 0], [Dx, 1, 0]]"),
                    {}};
  d.substitution[x.dep("v")] = x.P("u_x");
  d.substitution[x.dep("w")] = x.P("u_xx");
  return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds_since(t0);
}

std::string verdict_text(const TrivectorVerdict& v) {
  if (v.zero) return v.exact ? "zero (exact)" : "zero";
  std::string r = to_string(v.frame, v.residual);
  return std::string(v.exact ? "refuted" : "residual") + " wrt " + v.frame.dependent(v.residual_dep).name + ": " + r;
}

// Zero, or a nonempty rendered residual.
bool transparent(const TrivectorVerdict& v) { return v.zero || !to_string(v.frame, v.residual).empty(); }

Outcome kdv_bivectors() {
  Fx x;
  EquationSystem k = kdv(x);
  Outcome o{true, ""};
  for (const char* a : {"Dx", kA2}) {
    BivectorCheck c;
    double s = timed([&] { c = certify_bivector(k, x.O(a)); });
    const bool ok = c.certified() && c.residual.is_zero() && s < 1.0;
    o.pass = o.pass && ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f s", s);
    o.detail += std::string(o.detail.empty() ? "" : "; ") + a + (ok ? " certified " : " FAILED ") + buf;
  }
  return o;
}

Outcome kdv_flows() {
  Fx x;
  EquationSystem k = kdv(x);
  const VectorFunction flow = x.V("u_xxx + 6*u*u_x");
  VectorFunction f1 = k.reduce(apply(x.O("Dx"), euler(x.P("u^3 - u_x^2/2"), {0})));
  VectorFunction f2 = k.reduce(apply(x.O(kA2), euler(x.P("u^2/2"), {0})));
  return {f1 == flow && f2 == flow, "A1 d(u^3 - u_x^2/2) = " + x.S(f1) + ", A2 d(u^2/2) = " + x.S(f2)};
}

Outcome kdv_compatibility() {
  Fx x;
  EquationSystem k = kdv(x);
  Bivector a1 = require_bivector(k, x.O("Dx")), a2 = require_bivector(k, x.O(kA2));
  Outcome o{true, ""};
  const char* names[] = {"[A1, A1]", "[A2, A2]", "[A1, A2]"};
  int i = 0;
  for (auto [p, q] : {std::pair{&a1, &a1}, {&a2, &a2}, {&a1, &a2}}) {
    TrivectorVerdict v;
    double s = timed([&] { v = is_zero_trivector(k, schouten(*p, *q), {p->op(), q->op()}); });
    const bool ok = v.zero && v.exact && s < 10.0;
    o.pass = o.pass && ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.3f s", s);
    o.detail += std::string(o.detail.empty() ? "" : "; ") + names[i++] + " " + verdict_text(v) + buf;
  }
  return o;
}

Outcome three_component() {
  Fx x;
  EquationSystem k3 = kdv3(x);
  const VectorFunction flow = x.V("[v, w, u_t - 6*u*v]");
  const bool c1 = certify_bivector(k3, x.O(kM1)).certified(), c2 = certify_bivector(k3, x.O(kM2)).certified();
  VectorFunction f1 = k3.reduce(apply(x.O(kM1), euler(x.P("u*w - v^2/2 + 2*u^3"), {0, 1, 2})));
  VectorFunction f2 = k3.reduce(apply(x.O(kM2), euler(x.P("-3*u^2/2 - w/2"), {0, 1, 2})));
  return {c1 && c2 && f1 == flow && f2 == flow, std::string("M1 ") + (c1 ? "certified" : "not certified") +
                                                    ", M2 " + (c2 ? "certified" : "not certified") +
                                                    ", flows " + x.S(f1) + " and " + x.S(f2)};
}

Outcome equivalence() {
  Fx x;
  EquivalenceCheck c = verify_equivalence(kdv_equivalence(x));
  bool all_zero = c.relations.size() == 4;
  std::string detail;
  for (const auto& r : c.relations) {
    all_zero = all_zero && r.residual.is_zero();
    detail += std::string(detail.empty() ? "" : ", ") + (r.residual.is_zero() ? "0" : x.S(r.residual));
  }
  return {c.ok && all_zero, "relation residuals " + detail};
}

Outcome transport_check() {
  Fx x;
  EquivalenceData d = kdv_equivalence(x);
  CDiffOp t12 = transport(d, require_bivector(d.first, x.O("Dx")), Direction::first_to_second);
  const bool certified = certify_bivector(d.second, t12).certified();
  CDiffOp t21 = transport(d, require_bivector(d.second, x.O(kM1)), Direction::second_to_first);
  const bool minus_dx = t21 == x.O("-Dx");
  TrivectorVerdict cmp = equivalent_as_bivectors(d.second, t12, x.O(kM1));
  TrivectorVerdict neg = equivalent_as_bivectors(d.second, t12, -x.O(kM1));
  return {certified && minus_dx && transparent(cmp) && transparent(neg),
          "Dx 1->2 = " + x.S(t12) + (certified ? " certified" : " not certified") + "; M1 2->1 = " + x.S(t21) +
              "; vs M1: " + verdict_text(cmp) + "; vs -M1: " + verdict_text(neg)};
}

Outcome ch_scalar() {
  Fx x;
  EquationSystem c = ch(x);
  const bool c1 = certify_bivector(c, x.O("Dx")).certified();
  const bool c2 = certify_bivector(c, x.O("-Dt - u*Dx + u_x")).certified();
  return {c1 && c2, std::string("A1 ") + (c1 ? "certified" : "not certified") + ", A2 " +
                        (c2 ? "certified" : "not certified")};
}

Outcome ch_two_component() {
  Fx x;
  EquationSystem c2 = ch2(x);
  const CDiffOp a1 = x.O("[[Dx, 0], [Dx - Dx^3, 0]]"), a2 = x.O("[[0, -1], [2*m*Dx + m_x, 0]]");
  const bool k1 = certify_bivector(c2, a1).certified(), k2 = certify_bivector(c2, a2).certified();
  const CDiffOp b1 = x.O("-(m*Dx + Dx*m)"), b2 = x.O("Dx^3 - Dx");
  const CDiffOp e1 = a1.block(1, 0, 1, 1), e2 = a2.block(1, 0, 1, 1);
  auto up_to_sign = [](const CDiffOp& e, const CDiffOp& b) { return e == b || e == -b; };
  // The B operators occur among the (2,1) entries up to sign, in either order.
  const bool direct = up_to_sign(e1, b1) && up_to_sign(e2, b2);
  const bool swapped = up_to_sign(e1, b2) && up_to_sign(e2, b1);
  std::string match = direct ? "A'1(2,1) ~ B1, A'2(2,1) ~ B2" : swapped ? "A'1(2,1) = " + std::string(e1 == b2 ? "" : "-") +
                                                                         "B2, A'2(2,1) = " + (e2 == b1 ? "" : "-") + "B1"
                                                                   : "no match";
  return {k1 && k2 && (direct || swapped), std::string("A'1 ") + (k1 ? "certified" : "not certified") + ", A'2 " +
                                               (k2 ? "certified" : "not certified") + ", " + match};
}

struct Kdv6 {
  Fx x;
  EquationSystem base = kdv(x);
  Bivector a1 = require_bivector(base, x.O("Dx"));
  Bivector a2 = require_bivector(base, x.O(kA2));
  DepId w = x.dep("w");
};

Outcome kdv6() {
  Kdv6 k;
  std::optional<DeformedSystem> built;
  double s = timed([&] { built = deform(k.a1, k.a2, {k.w}); });
  const DeformedSystem& d = *built;
  auto flip = [&](const DiffPoly& p) {
    return substitute(p, [&](const JetVar& v) { return v.dep == k.w ? -DiffPoly::var(v) : DiffPoly::var(v); });
  };
  // u_t = u_xxx + 6 u u_x - w_x, w_xxx + 4 u w_x + 2 u_x w = 0
  const bool eqs = d.system.equations().size() == 2 &&
                   flip(d.system.equations()[0]) == k.x.P("u_t - u_xxx - 6*u*u_x + w_x") &&
                   flip(d.system.equations()[1]) == k.x.P("w_xxx + 4*u*w_x + 2*u_x*w");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return {eqs && d.certified() && s < 30.0,
          std::string(eqs ? "equations match after w -> -w" : "equations differ") + ", tilde A1 " +
              (d.check1.certified() ? "certified" : "not certified") + ", tilde A2 " +
              (d.check2.certified() ? "certified" : "not certified") + ", L = " + k.x.S(d.l) + ", " + buf};
}

Outcome lifting() {
  Kdv6 k;
  DeformedSystem d = deform(k.a1, k.a2, {k.w});
  GenFn h = GenFn::certify(k.base, {k.x.P("3*u^2 + u_xx")}), u = GenFn::certify(k.base, {k.x.P("u")});
  GenFn half = GenFn::certify(k.base, {k.x.P("1/2")});
  LiftedChain pair = lift_hierarchy(d, {h, u});
  LiftedChain chain = lift_hierarchy(d, {h, u, half});
  bool genfns = !pair.entries.empty() && !chain.entries.empty();
  for (const auto& e : pair.entries) genfns = genfns && e.genfn;
  for (const auto& e : chain.entries) genfns = genfns && e.genfn;
  const bool magri = chain.magri && chain.magri->ok;
  ConservationCheck cons = check_conserved(d, h, u);
  std::string lifted;
  for (const auto& e : chain.entries) lifted += (lifted.empty() ? "" : ", ") + k.x.S(e.psi);
  return {genfns && magri && cons.conserved && pair.ok() && chain.ok(),
          "lifted " + lifted + (genfns ? " generating functions" : " not all generating functions") +
              (magri ? ", Magri ok" : ", Magri failed") + (cons.conserved ? ", conserved" : ", not conserved")};
}

// Randomized invariants over x, t with u, v.
struct Gen {
  std::mt19937 rng;
  Fx x;

  explicit Gen(unsigned seed) : rng(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  Rational coef() {
    int n = uniform(-5, 5);
    Rational q(n == 0 ? 1 : n, uniform(1, 3));
    q.canonicalize();
    return q;
  }

  MultiIndex index(int max) {
    MultiIndex m;
    const int total = uniform(0, max), tpart = uniform(0, total);
    m.set(0, static_cast<std::uint16_t>(total - tpart));
    m.set(1, static_cast<std::uint16_t>(tpart));
    return m;
  }

  DiffPoly poly(int deps = 2, int max_order = 4, int terms = 3) {
    DiffPoly p;
    for (int i = uniform(1, terms); i > 0; --i) {
      DiffPoly m(coef());
      for (int d = uniform(0, 3); d > 0; --d)
        m *= DiffPoly::var(static_cast<DepId>(uniform(0, deps - 1)), index(max_order));
      p += m;
    }
    return p;
  }

  CDiffOp op(std::size_t n) {
    CDiffOp a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (int k = uniform(0, 2); k > 0; --k) a.add(i, j, index(2), poly(2, 4, 2));
    return a;
  }

  VectorFunction vec(std::size_t n) {
    std::vector<DiffPoly> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(poly(2, 4, 2));
    return VectorFunction(std::move(e));
  }
};

constexpr int kCases = 100;

Outcome properties() {
  struct Property {
    const char* name;
    std::function<bool(Gen&, int)> holds;
  };
  Fx fx;
  const EquationSystem systems[] = {kdv(fx), kdv3(fx), ch(fx)};
  const int system_deps[] = {1, 3, 1};
  EquationSystem k = kdv(fx);
  Bivector a1 = require_bivector(k, fx.O("Dx")), a2 = require_bivector(k, fx.O(kA2));
  const VectorFunction basis[] = {fx.V("1"), fx.V("u"), fx.V("3*u^2 + u_xx"),
                                  fx.V("10*u^3 + 5*u_x^2 + 10*u*u_xx + u_xxxx")};
  const std::vector<Property> props = {
      {"D-commutativity",
       [](Gen& g, int) {
         DiffPoly p = g.poly();
         return total_derivative(0, total_derivative(1, p)) == total_derivative(1, total_derivative(0, p));
       }},
      {"euler of a total derivative",
       [](Gen& g, int i) {
         return euler(total_derivative(static_cast<std::size_t>(i % 2), g.poly()), {0, 1}).is_zero();
       }},
      {"adjoint involution", [](Gen& g, int i) {
         CDiffOp a = g.op(static_cast<std::size_t>(1 + i % 2));
         return adjoint(adjoint(a)) == a;
       }},
      {"adjoint antihomomorphism",
       [](Gen& g, int i) {
         const std::size_t n = static_cast<std::size_t>(1 + i % 2);
         CDiffOp a = g.op(n), b = g.op(n);
         return adjoint(compose(a, b)) == compose(adjoint(b), adjoint(a));
       }},
      {"divergence pairing",
       [](Gen& g, int i) {
         const std::size_t n = static_cast<std::size_t>(1 + i % 2);
         CDiffOp a = g.op(n);
         VectorFunction v = g.vec(n), w = g.vec(n);
         return euler(pairing(apply(a, v), w) - pairing(v, apply(adjoint(a), w)), {0, 1}).is_zero();
       }},
      {"reduce idempotence and morphism",
       [&](Gen& g, int i) {
         const EquationSystem& e = systems[i % 3];
         DiffPoly p = g.poly(system_deps[i % 3], 3), q = g.poly(system_deps[i % 3], 3);
         DiffPoly rp = e.reduce(p);
         return e.reduce(rp) == rp && e.reduce(p * q) == e.reduce(rp * e.reduce(q));
       }},
      {"poisson outputs are generating functions",
       [&](Gen& g, int i) {
         auto combo = [&] {
           VectorFunction v{DiffPoly()};
           for (const auto& b : basis) v = v + Rational(g.uniform(-3, 3)) * b;
           return GenFn::certify(k, v);
         };
         GenFn p = combo(), q = combo();
         return is_genfn(k, poisson(i % 2 ? a2 : a1, p, q));
       }},
  };
  Outcome o{true, ""};
  unsigned seed = 1;
  for (const auto& prop : props) {
    Gen g(seed++);
    int failures = 0;
    for (int i = 0; i < kCases; ++i) failures += !prop.holds(g, i);
    o.pass = o.pass && failures == 0;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + prop.name + " " + std::to_string(kCases - failures) +
                "/" + std::to_string(kCases);
  }
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every verdict object in a report has zero = true or a nonempty residual.
void scan_verdicts(const nlohmann::ordered_json& j, int& seen, int& silent) {
  if (j.is_object()) {
    if (j.contains("zero") && j.contains("exact")) {
      ++seen;
      const bool shown = j["zero"].get<bool>() ||
                         (j.contains("residual") && j["residual"].is_string() && !j["residual"].get<std::string>().empty());
      silent += !shown;
      return;
    }
    for (const auto& [key, value] : j.items()) scan_verdicts(value, seen, silent);
  } else if (j.is_array()) {
    for (const auto& value : j) scan_verdicts(value, seen, silent);
  }
}

Outcome transparency() {
  Fx x;
  int seen = 0, silent = 0;
  auto count = [&](const TrivectorVerdict& v) {
    ++seen;
    silent += !transparent(v);
  };
  auto pairs = [&](const EquationSystem& eq, const char* p, const char* q) {
    Bivector a = require_bivector(eq, x.O(p)), b = require_bivector(eq, x.O(q));
    for (auto [l, r] : {std::pair{&a, &a}, {&a, &b}, {&b, &b}})
      count(is_zero_trivector(eq, schouten(*l, *r), {l->op(), r->op()}));
  };
  pairs(kdv3(x), kM1, kM2);
  pairs(ch(x), "Dx", "-Dt - u*Dx + u_x");
  pairs(ch2(x), "[[Dx, 0], [Dx - Dx^3, 0]]", "[[0, -1], [2*m*Dx + m_x, 0]]");
  Kdv6 k;
  DeformedSystem d = deform(k.a1, k.a2, {k.w});
  if (d.certified()) {
    const Bivector& t1 = *d.check1.bivector;
    const Bivector& t2 = *d.check2.bivector;
    for (auto [l, r] : {std::pair{&t1, &t1}, {&t1, &t2}, {&t2, &t2}})
      count(is_zero_trivector(d.system, schouten(*l, *r), {l->op(), r->op()}));
  } else {
    ++seen;
    ++silent;
  }
  const int direct = seen;
  for (const char* name : {"kdv3.hc", "ch.hc", "kdv6.hc"}) {
    const std::string src = read_file(std::string(HAMCHECK_TEST_DATA) + "/" + name);
    RunReport r = run_program(dsl::parse_program(src), src);
    scan_verdicts(nlohmann::ordered_json::parse(report_json(r)), seen, silent);
  }
  return {silent == 0 && direct == 12, std::to_string(direct) + " direct verdicts and " +
                                           std::to_string(seen - direct) + " report verdicts, " +
                                           std::to_string(silent) + " silent"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"KdV bivectors", kdv_bivectors},
      {"KdV flows", kdv_flows},
      {"KdV compatibility", kdv_compatibility},
      {"three-component KdV", three_component},
      {"equivalence data", equivalence},
      {"transport", transport_check},
      {"Camassa-Holm scalar form", ch_scalar},
      {"Camassa-Holm two-component form", ch_two_component},
      {"Kupershmidt deformation (KdV6)", kdv6},
      {"hierarchy lifting", lifting},
      {"property suites", properties},
      {"semi-decision transparency", transparency},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s (%.3f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, seconds_since(t0),
                o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed in %.3f s\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size(), seconds_since(start));
  return failed == 0 ? 0 : 1;
}
