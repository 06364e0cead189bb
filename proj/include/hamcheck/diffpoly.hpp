#ifndef HAMCHECK_DIFFPOLY_HPP
#define HAMCHECK_DIFFPOLY_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "hamcheck/jet.hpp"

namespace hamcheck {

class Monomial {
 public:
  using Factor = std::pair<JetVar, std::uint32_t>;

  Monomial() = default;
  static Monomial of(const JetVar& v, std::uint32_t exponent = 1);
  static Monomial of_independent(std::size_t i, std::uint16_t exponent = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  const std::array<std::uint16_t, kMaxIndependents>& independent_powers() const { return xpow_; }

  bool is_one() const;
  unsigned degree() const;
  std::uint32_t exponent(const JetVar& v) const;

  Monomial operator*(const Monomial& o) const;
  // Precondition: exponent(v) > 0.
  Monomial without_one(const JetVar& v) const;
  Monomial without_independent_one(std::size_t i) const;
  Monomial with_factor(const JetVar& v) const { return *this * of(v); }

  // Graded lexicographic: total degree, then factor list, then x-powers.
  std::strong_ordering operator<=>(const Monomial& o) const;
  bool operator==(const Monomial& o) const = default;

 private:
  std::vector<Factor> factors_;  // sorted by JetVar, exponents > 0
  std::array<std::uint16_t, kMaxIndependents> xpow_{};
};

// Exact sparse polynomial in jet variables and explicit independents.
class DiffPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  DiffPoly() = default;
  DiffPoly(const Rational& c);  // NOLINT: constants convert implicitly
  DiffPoly(long c) : DiffPoly(Rational(c)) {}  // NOLINT
  DiffPoly(int c) : DiffPoly(Rational(c)) {}   // NOLINT

  static DiffPoly var(const JetVar& v);
  static DiffPoly var(DepId dep, const MultiIndex& idx = {}) { return var(JetVar{dep, idx}); }
  static DiffPoly independent(std::size_t i);
  static DiffPoly term(const Rational& c, const Monomial& m);

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;

  void add_term(const Monomial& m, const Rational& c);

  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const Rational& c);
  DiffPoly& operator*=(const DiffPoly& o);

  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
  friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }
  DiffPoly operator-() const;

  DiffPoly pow(unsigned e) const;

  bool operator==(const DiffPoly& o) const = default;

  std::set<JetVar> variables() const;
  std::set<DepId> dependents() const;
  bool involves(const std::function<bool(DepId)>& pred) const;

  // Highest total power of dependents satisfying pred over all terms.
  unsigned degree_in(const std::function<bool(DepId)>& pred) const;

  DiffPoly partial(const JetVar& v) const;
  DiffPoly partial_independent(std::size_t i) const;

  // Keep only terms whose degree in pred-dependents is within [lo, hi].
  DiffPoly filter_degree(const std::function<bool(DepId)>& pred, unsigned lo, unsigned hi) const;

  // Renames dependents (jets follow): var (d, s) becomes (map(d), s).
  DiffPoly rename(const std::function<DepId(DepId)>& map) const;

 private:
  Terms terms_;
};

// Ring substitution: every variable v is replaced by image(v), products
// expanded. `truncate`, when set, is applied to every intermediate product.
DiffPoly substitute(const DiffPoly& p, const std::function<DiffPoly(const JetVar&)>& image,
                    const std::function<void(DiffPoly&)>& truncate = {});

class VectorFunction {
 public:
  VectorFunction() = default;
  explicit VectorFunction(std::size_t n) : entries_(n) {}
  VectorFunction(std::initializer_list<DiffPoly> e) : entries_(e) {}
  explicit VectorFunction(std::vector<DiffPoly> e) : entries_(std::move(e)) {}

  std::size_t size() const { return entries_.size(); }
  DiffPoly& operator[](std::size_t i) { return entries_.at(i); }
  const DiffPoly& operator[](std::size_t i) const { return entries_.at(i); }
  const std::vector<DiffPoly>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool is_zero() const;

  VectorFunction& operator+=(const VectorFunction& o);
  VectorFunction& operator-=(const VectorFunction& o);
  friend VectorFunction operator+(VectorFunction a, const VectorFunction& b) { return a += b; }
  friend VectorFunction operator-(VectorFunction a, const VectorFunction& b) { return a -= b; }
  friend VectorFunction operator*(const Rational& c, VectorFunction a);
  VectorFunction operator-() const;
  bool operator==(const VectorFunction& o) const = default;

  // Component i of the vector of dependents `deps` (each as a bare variable).
  static VectorFunction of_dependents(const std::vector<DepId>& deps);

 private:
  std::vector<DiffPoly> entries_;
};

// Pairing <a, b> = sum_i a_i b_i.
DiffPoly pairing(const VectorFunction& a, const VectorFunction& b);

}  // namespace hamcheck

#endif  // HAMCHECK_DIFFPOLY_HPP
