#ifndef HAMCHECK_JET_HPP
#define HAMCHECK_JET_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hamcheck {

using Rational = mpq_class;

// Multi-indices are stored inline; frames with more independents are rejected.
inline constexpr std::size_t kMaxIndependents = 4;

class MultiIndex {
 public:
  MultiIndex() = default;

  static MultiIndex unit(std::size_t i) {
    MultiIndex m;
    m.counts_[i] = 1;
    return m;
  }

  std::uint16_t operator[](std::size_t i) const { return counts_[i]; }
  void set(std::size_t i, std::uint16_t v) { counts_[i] = v; }

  unsigned order() const {
    unsigned s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  bool is_zero() const { return order() == 0; }

  // Componentwise partial order: *this <= other.
  bool divides(const MultiIndex& other) const {
    for (std::size_t i = 0; i < kMaxIndependents; ++i)
      if (counts_[i] > other.counts_[i]) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r;
    for (std::size_t i = 0; i < kMaxIndependents; ++i)
      r.counts_[i] = static_cast<std::uint16_t>(counts_[i] + o.counts_[i]);
    return r;
  }

  // Precondition: o.divides(*this).
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r;
    for (std::size_t i = 0; i < kMaxIndependents; ++i)
      r.counts_[i] = static_cast<std::uint16_t>(counts_[i] - o.counts_[i]);
    return r;
  }

  MultiIndex plus_unit(std::size_t i) const {
    MultiIndex r = *this;
    ++r.counts_[i];
    return r;
  }

  static MultiIndex lcm(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r;
    for (std::size_t i = 0; i < kMaxIndependents; ++i)
      r.counts_[i] = std::max(a.counts_[i], b.counts_[i]);
    return r;
  }

  // Graded: total order first, then lexicographic in declaration order.
  std::strong_ordering operator<=>(const MultiIndex& o) const {
    if (auto c = order() <=> o.order(); c != 0) return c;
    return counts_ <=> o.counts_;
  }
  bool operator==(const MultiIndex& o) const = default;

  const std::array<std::uint16_t, kMaxIndependents>& counts() const { return counts_; }

 private:
  std::array<std::uint16_t, kMaxIndependents> counts_{};
};

// Product of binomial coefficients prod_i C(sigma_i, rho_i).
Rational multinomial_binomial(const MultiIndex& sigma, const MultiIndex& rho);

// All rho with rho <= sigma componentwise.
std::vector<MultiIndex> sub_indices(const MultiIndex& sigma);

// All multi-indices over n independents with order <= max_order.
std::vector<MultiIndex> indices_up_to(std::size_t n, unsigned max_order);

using DepId = std::uint32_t;

// Dependents at or above this id are internal placeholders for D_tau(F_k).
inline constexpr DepId kMarkerBase = DepId{1} << 24;

inline bool is_marker(DepId d) { return d >= kMarkerBase; }

struct JetVar {
  DepId dep = 0;
  MultiIndex idx;

  std::strong_ordering operator<=>(const JetVar& o) const {
    if (auto c = dep <=> o.dep; c != 0) return c;
    return idx <=> o.idx;
  }
  bool operator==(const JetVar& o) const = default;
};

enum class DepKind { physical, formal };

struct Dependent {
  std::string name;
  DepKind kind = DepKind::physical;
};

// Coordinates of the jet space. Polynomials refer to dependents by id only, so
// an extended frame (same prefix, more dependents) stays compatible with every
// value built over the original one.
class Frame {
 public:
  Frame() = default;
  Frame(std::vector<std::string> independents, std::vector<Dependent> dependents);

  std::size_t num_independents() const { return independents_.size(); }
  std::size_t num_dependents() const { return dependents_.size(); }

  const std::string& independent(std::size_t i) const { return independents_.at(i); }
  const Dependent& dependent(DepId d) const { return dependents_.at(d); }
  const std::vector<std::string>& independents() const { return independents_; }
  const std::vector<Dependent>& dependents() const { return dependents_; }

  std::optional<std::size_t> find_independent(const std::string& name) const;
  std::optional<DepId> find_dependent(const std::string& name) const;

  std::vector<DepId> physical() const;

  Frame extended(const std::vector<Dependent>& extra) const;

  // Parses `u`, `u_xxt`, `u_txx`; derivative letters in any order.
  std::optional<JetVar> parse_jet(const std::string& text) const;

 private:
  std::vector<std::string> independents_;
  std::vector<Dependent> dependents_;
};

}  // namespace hamcheck

#endif  // HAMCHECK_JET_HPP
