#ifndef HAMCHECK_TEST_SUPPORT_HPP
#define HAMCHECK_TEST_SUPPORT_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "hamcheck/hamcheck.hpp"

namespace hctest {

using namespace hamcheck;

// Parsing and rendering shortcuts over one frame.
struct Fx {
  Frame f;

  explicit Fx(Frame frame) : f(std::move(frame)) {}

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

// x, t with u, v, w, m available.
inline Fx xt() { return Fx(Frame({"x", "t"}, {{"u"}, {"v"}, {"w"}, {"m"}})); }

inline Ranking t_over_x(std::vector<DepId> deps) { return Ranking({1, 0}, std::move(deps)); }
inline Ranking x_over_t(std::vector<DepId> deps) { return Ranking({0, 1}, std::move(deps)); }

inline EquationSystem kdv(const Fx& x) {
  return EquationSystem::make(x.f, {0}, {x.P("u_t - u_xxx - 6*u*u_x")},
                              {{x.J("u_t"), x.P("u_xxx + 6*u*u_x")}}, t_over_x({0}));
}

inline EquationSystem kdv3(const Fx& x) {
  return EquationSystem::make(x.f, {0, 1, 2}, {x.P("u_x - v"), x.P("v_x - w"), x.P("w_x - u_t + 6*u*v")},
                              {{x.J("u_x"), x.P("v")}, {x.J("v_x"), x.P("w")}, {x.J("w_x"), x.P("u_t - 6*u*v")}},
                              x_over_t({0, 1, 2}));
}

inline EquationSystem ch(const Fx& x) {
  return EquationSystem::make(x.f, {0}, {x.P("u_t - u_txx - u*u_xxx - 2*u_x*u_xx + 3*u*u_x")},
                              {{x.J("u_txx"), std::nullopt}}, t_over_x({0}));
}

inline EquationSystem ch2(const Fx& x) {
  const DepId m = x.dep("m");
  return EquationSystem::make(x.f, {0, m}, {x.P("m_t + u*m_x + 2*u_x*m"), x.P("m - u + u_xx")},
                              {{x.J("m_t"), std::nullopt}, {x.J("u_xx"), std::nullopt}}, t_over_x({0, m}));
}

inline const char* kA2 = "Dx^3 + 4*u*Dx + 2*u_x";
inline const char* kM1 = "[[0, -1, 0], [1, 0, -6*u], [0, 6*u, Dt]]";
inline const char* kM2 =
    "[[0, -2*u, -Dt - 2*v], [2*u, Dt, -12*u^2 - 2*w], [-Dt + 2*v, 12*u^2 + 2*w, 8*u*Dt + 4*u_t]]";

inline EquivalenceData kdv_equivalence(const Fx& x) {
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

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string data_path(const std::string& name) { return std::string(HAMCHECK_TEST_DATA) + "/" + name; }

// Frame used by failure messages: x, t and u, v, w, m, then d4, d5, ...
inline Frame print_frame(DepId max_dep) {
  std::vector<Dependent> deps{{"u"}, {"v"}, {"w"}, {"m"}};
  for (DepId d = 4; d <= max_dep; ++d) deps.push_back({"d" + std::to_string(d), DepKind::formal});
  return Frame({"x", "t"}, deps);
}

inline DepId max_dep(const DiffPoly& p) {
  DepId m = 0;
  for (auto d : p.dependents()) m = std::max(m, d);
  return m;
}

}  // namespace hctest

namespace doctest {

template <>
struct StringMaker<hamcheck::DiffPoly> {
  static String convert(const hamcheck::DiffPoly& p) {
    return hamcheck::to_string(hctest::print_frame(hctest::max_dep(p)), p).c_str();
  }
};

template <>
struct StringMaker<hamcheck::VectorFunction> {
  static String convert(const hamcheck::VectorFunction& v) {
    hamcheck::DepId m = 0;
    for (const auto& e : v) m = std::max(m, hctest::max_dep(e));
    return hamcheck::to_string(hctest::print_frame(m), v).c_str();
  }
};

template <>
struct StringMaker<hamcheck::CDiffOp> {
  static String convert(const hamcheck::CDiffOp& a) {
    hamcheck::DepId m = 0;
    for (const auto& e : a.coefficients()) m = std::max(m, hctest::max_dep(e));
    return hamcheck::to_string(hctest::print_frame(m), a).c_str();
  }
};

}  // namespace doctest

#endif  // HAMCHECK_TEST_SUPPORT_HPP
