#include <doctest.h>

#include <numeric>

#include "oracle.hpp"
#include "support.hpp"

using namespace hctest;

namespace {

// Integral of the density skew-symmetrized over the three formal slots.
double skew_integral(const DiffPoly& rho, const std::vector<DepId>& slots, const Assignment& f) {
  std::vector<int> perm{0, 1, 2};
  double total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) inversions += perm[i] > perm[j];
    Assignment g = f;
    for (int i = 0; i < 3; ++i) g[slots[i]] = f.at(slots[perm[i]]);
    total += (inversions % 2 ? -1 : 1) * integrate(rho, g);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

TrivectorRep scalar_trivector(const EquationSystem& eq, const char* expr) {
  FormalArgs args = make_formal_args(eq.frame(), 1);
  return {args, {dsl::parse_poly(args.frame, expr)}};
}

}  // namespace

TEST_CASE("bivector certification on KdV") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  BivectorCheck c1 = certify_bivector(k, x.O("Dx"));
  REQUIRE(c1.certified());
  CHECK(c1.residual.is_zero());
  CHECK(c1.bivector->b().is_zero());
  BivectorCheck c2 = certify_bivector(k, x.O(kA2));
  REQUIRE(c2.certified());
  CHECK(to_string(c2.bivector->args().frame, c2.bivector->b()) == "4*psi1_x + 2*psi1*Dx");
  // l A - A* l* for A = 1 is l - l* = 2 Dt - 2 Dx^3 - 12 u Dx - 6 u_x
  BivectorCheck id = certify_bivector(k, x.O("1"));
  CHECK_FALSE(id.certified());
  CHECK(id.residual == x.O("2*Dt - 2*Dx^3 - 12*u*Dx - 6*u_x"));
  CHECK_THROWS_AS(require_bivector(k, x.O("1")), Error);
  CHECK_THROWS_AS(certify_bivector(k, x.O("[[Dx, 0], [0, Dx]]")), Error);
}

TEST_CASE("B* agrees with the evolution formula") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  Bivector a2 = require_bivector(k, x.O(kA2));
  const FormalArgs& args = a2.args();
  VectorFunction p1 = args.vec(0), p2 = args.vec(1);
  CHECK(a2.b_star(p1, p2) == evolution_b_star(k, a2.op(), p1, p2));
  CHECK(to_string(args.frame, a2.b_star(p1, p2)) == "[2*psi1*psi2_x - 2*psi1_x*psi2]");
}

TEST_CASE("three-component KdV bivectors") {
  Fx x = xt();
  EquationSystem k3 = kdv3(x);
  CHECK(certify_bivector(k3, x.O(kM1)).certified());
  CHECK(certify_bivector(k3, x.O(kM2)).certified());
  CHECK(k3.reduce(apply(x.O(kM1), euler(x.P("u*w - v^2/2 + 2*u^3"), {0, 1, 2}))) ==
        x.V("[v, w, u_t - 6*u*v]"));
  CHECK(k3.reduce(apply(x.O(kM2), euler(x.P("-3*u^2/2 - w/2"), {0, 1, 2}))) == x.V("[v, w, u_t - 6*u*v]"));
}

TEST_CASE("certified bivectors on evolution systems are skew-adjoint") {
  Fx x = xt();
  EquationSystem k = kdv(x), k3 = kdv3(x);
  for (const auto& [eq, op] : {std::pair{k, x.O("Dx")}, {k, x.O(kA2)}, {k3, x.O(kM1)}, {k3, x.O(kM2)}}) {
    Bivector b = require_bivector(eq, op);
    CHECK(eq.restrict_op(adjoint(b.op()) + b.op()).is_zero());
  }
}

TEST_CASE("schouten brackets on KdV") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  Bivector a1 = require_bivector(k, x.O("Dx")), a2 = require_bivector(k, x.O(kA2));
  CHECK(schouten(a1, a1).value.is_zero());
  for (auto [p, q] : {std::pair{&a1, &a2}, {&a2, &a2}, {&a1, &a1}}) {
    TrivectorVerdict v = is_zero_trivector(k, schouten(*p, *q), {p->op(), q->op()});
    CHECK(v.zero);
    CHECK(v.exact);
  }
  // symmetric in the two slots after normalization
  TrivectorRep s12 = schouten(a1, a2), s21 = schouten(a2, a1);
  TrivectorRep diff{s12.args, s12.value - s21.value};
  CHECK(is_zero_trivector(k, diff, {a1.op(), a2.op()}).zero);
}

TEST_CASE("zero-trivector test") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  CHECK(is_zero_trivector(k, scalar_trivector(k, "psi1*psi2")).zero);
  CHECK(is_zero_trivector(k, scalar_trivector(k, "0")).zero);
  // psi3 (psi1 psi2_x - psi2 psi1_x) is annihilated by skew-symmetrization
  CHECK(is_zero_trivector(k, scalar_trivector(k, "psi1*psi2_x - psi2*psi1_x")).zero);
  TrivectorVerdict v = is_zero_trivector(k, scalar_trivector(k, "psi1_x*psi2_xx"));
  CHECK_FALSE(v.zero);
  CHECK(v.exact);
  CHECK(v.refuted());
  CHECK_FALSE(v.residual.is_zero());
}

TEST_CASE("zero-trivector verdicts match the integral oracle") {
  Fx x = xt();
  EquationSystem frozen =
      EquationSystem::make(x.f, {0}, {x.P("u_t")}, {{x.J("u_t"), x.P("0")}}, t_over_x({0}));
  std::mt19937 rng(11);
  for (const char* t : {"psi1*psi2_x - psi2*psi1_x", "psi1_x*psi2_xx", "psi1*psi2", "u*psi1*psi2_xxx",
                        "u_x*psi1_x*psi2"}) {
    TrivectorRep rep = scalar_trivector(frozen, t);
    TrivectorVerdict v = is_zero_trivector(frozen, rep);
    REQUIRE(v.exact);
    const auto& s = rep.args.slots;
    DiffPoly rho = DiffPoly::var(s[2][0]) * rep.value[0];
    double worst = 0;
    for (int trial = 0; trial < 4; ++trial) {
      Assignment f{{0, TrigFunction::random(rng)}};
      for (const auto& slot : s) f[slot[0]] = TrigFunction::random(rng);
      worst = std::max(worst, std::abs(skew_integral(rho, {s[0][0], s[1][0], s[2][0]}, f)));
    }
    INFO(t);
    CHECK(v.zero == (worst < 1e-9));
  }
}

TEST_CASE("a non-Hamiltonian bivector is detected") {
  Fx x = xt();
  EquationSystem frozen =
      EquationSystem::make(x.f, {0}, {x.P("u_t")}, {{x.J("u_t"), x.P("0")}}, t_over_x({0}));
  for (const char* a : {"u*Dx + Dx*u", "u^2*Dx + Dx*u^2"}) {
    HamiltonianCheck h = is_hamiltonian(frozen, x.O(a));
    CHECK(h.hamiltonian());
  }
  for (const char* a : {"u_x*Dx + Dx*u_x", "u*Dx^3 + Dx^3*u"}) {
    HamiltonianCheck h = is_hamiltonian(frozen, x.O(a));
    REQUIRE(h.bivector.certified());
    CHECK(h.trivector->refuted());
  }
  CHECK_FALSE(certify_bivector(frozen, x.O("Dx*u*Dx")).certified());
}

TEST_CASE("constrained systems use the semi-decision") {
  Fx x = xt();
  EquationSystem c = ch(x);
  Bivector a1 = require_bivector(c, x.O("Dx")), a2 = require_bivector(c, x.O("-Dt - u*Dx + u_x"));
  CHECK(to_string(a2.args().frame, a2.b()) == "2*psi1_x + psi1*Dx");
  for (auto [p, q] : {std::pair{&a1, &a1}, {&a1, &a2}, {&a2, &a2}}) {
    TrivectorVerdict v = is_zero_trivector(c, schouten(*p, *q), {p->op(), q->op()});
    CHECK(v.zero);
    CHECK_FALSE(v.exact);
  }
  EquationSystem c2 = ch2(x);
  Bivector b1 = require_bivector(c2, x.O("[[Dx, 0], [Dx - Dx^3, 0]]"));
  Bivector b2 = require_bivector(c2, x.O("[[0, -1], [2*m*Dx + m_x, 0]]"));
  for (auto [p, q] : {std::pair{&b1, &b1}, {&b1, &b2}, {&b2, &b2}})
    CHECK(is_zero_trivector(c2, schouten(*p, *q), {p->op(), q->op()}).zero);
  EquationSystem k3 = kdv3(x);
  Bivector m1 = require_bivector(k3, x.O(kM1)), m2 = require_bivector(k3, x.O(kM2));
  for (auto [p, q] : {std::pair{&m1, &m1}, {&m1, &m2}, {&m2, &m2}})
    CHECK(is_zero_trivector(k3, schouten(*p, *q), {p->op(), q->op()}).zero);
}

TEST_CASE("comparing bivectors") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  CHECK(equivalent_as_bivectors(k, x.O(kA2), x.O(kA2)).zero);
  TrivectorVerdict v = equivalent_as_bivectors(k, x.O("Dx"), x.O("-Dx"));
  CHECK_FALSE(v.zero);
  CHECK(v.exact);
}

TEST_CASE("poisson brackets") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  Bivector a1 = require_bivector(k, x.O("Dx")), a2 = require_bivector(k, x.O(kA2));
  GenFn one = GenFn::certify(k, {x.P("1")}), u = GenFn::certify(k, {x.P("u")});
  GenFn h = GenFn::certify(k, {x.P("3*u^2 + u_xx")});
  CHECK(poisson(a1, one, one).is_zero());
  CHECK(poisson(a1, u, one).is_zero());
  CHECK(poisson(a1, h, u).is_zero());
  CHECK(poisson(a2, h, u).is_zero());
  CHECK(is_genfn(k, poisson(a2, u, h)));
}

TEST_CASE("magri chains") {
  Fx x = xt();
  EquationSystem k = kdv(x);
  Bivector a1 = require_bivector(k, x.O("Dx")), a2 = require_bivector(k, x.O(kA2));
  GenFn h = GenFn::certify(k, {x.P("3*u^2 + u_xx")}), u = GenFn::certify(k, {x.P("u")});
  GenFn half = GenFn::certify(k, {x.P("1/2")});
  CHECK(verify_magri(a1, a2, {h, u}).ok);
  CHECK(verify_magri(a1, a2, {h, u, half}, true).ok);
  CHECK(verify_magri(a1, a2, {}).ok);
  MagriCheck bad = verify_magri(a1, a2, {u, u});
  CHECK_FALSE(bad.ok);
  CHECK(bad.failed_pair == std::optional<std::size_t>(0));
  CHECK(bad.residual == x.V("u_x - u_xxx - 6*u*u_x"));
}
