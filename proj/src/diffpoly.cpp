#include "hamcheck/diffpoly.hpp"

#include <algorithm>

#include "hamcheck/error.hpp"
#include "hamcheck/kernels.hpp"

namespace hamcheck {

Monomial Monomial::of(const JetVar& v, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.push_back({v, exponent});
  return m;
}

Monomial Monomial::of_independent(std::size_t i, std::uint16_t exponent) {
  Monomial m;
  m.xpow_[i] = exponent;
  return m;
}

bool Monomial::is_one() const {
  if (!factors_.empty()) return false;
  for (auto p : xpow_)
    if (p) return false;
  return true;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& [v, e] : factors_) d += e;
  for (auto p : xpow_) d += p;
  return d;
}

std::uint32_t Monomial::exponent(const JetVar& v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const Factor& f, const JetVar& x) { return f.first < x; });
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin();
  auto b = o.factors_.begin();
  while (a != factors_.end() && b != o.factors_.end()) {
    if (a->first < b->first) {
      r.factors_.push_back(*a++);
    } else if (b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.push_back({a->first, a->second + b->second});
      ++a;
      ++b;
    }
  }
  r.factors_.insert(r.factors_.end(), a, factors_.end());
  r.factors_.insert(r.factors_.end(), b, o.factors_.end());
  for (std::size_t i = 0; i < kMaxIndependents; ++i)
    r.xpow_[i] = static_cast<std::uint16_t>(xpow_[i] + o.xpow_[i]);
  return r;
}

Monomial Monomial::without_one(const JetVar& v) const {
  Monomial r = *this;
  for (auto it = r.factors_.begin(); it != r.factors_.end(); ++it) {
    if (it->first == v) {
      if (--it->second == 0) r.factors_.erase(it);
      return r;
    }
  }
  return r;
}

Monomial Monomial::without_independent_one(std::size_t i) const {
  Monomial r = *this;
  --r.xpow_[i];
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  if (auto c = degree() <=> o.degree(); c != 0) return c;
  if (auto c = factors_ <=> o.factors_; c != 0) return c;
  return xpow_ <=> o.xpow_;
}

DiffPoly::DiffPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

DiffPoly DiffPoly::var(const JetVar& v) {
  DiffPoly p;
  p.terms_.emplace(Monomial::of(v), Rational(1));
  return p;
}

DiffPoly DiffPoly::independent(std::size_t i) {
  DiffPoly p;
  p.terms_.emplace(Monomial::of_independent(i), Rational(1));
  return p;
}

DiffPoly DiffPoly::term(const Rational& c, const Monomial& m) {
  DiffPoly p;
  p.add_term(m, c);
  return p;
}

bool DiffPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational DiffPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

void DiffPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, k] : terms_) k *= c;
  return *this;
}

DiffPoly& DiffPoly::operator*=(const DiffPoly& o) {
  *this = *this * o;
  return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) { return kernels::multiply(a, b); }

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

DiffPoly DiffPoly::pow(unsigned e) const {
  DiffPoly result(1);
  DiffPoly base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

std::set<JetVar> DiffPoly::variables() const {
  std::set<JetVar> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors()) out.insert(v);
  return out;
}

std::set<DepId> DiffPoly::dependents() const {
  std::set<DepId> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors()) out.insert(v.dep);
  return out;
}

bool DiffPoly::involves(const std::function<bool(DepId)>& pred) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors())
      if (pred(v.dep)) return true;
  return false;
}

namespace {

unsigned monomial_degree_in(const Monomial& m, const std::function<bool(DepId)>& pred) {
  unsigned d = 0;
  for (const auto& [v, e] : m.factors())
    if (pred(v.dep)) d += e;
  return d;
}

}  // namespace

unsigned DiffPoly::degree_in(const std::function<bool(DepId)>& pred) const {
  unsigned best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, monomial_degree_in(m, pred));
  return best;
}

DiffPoly DiffPoly::partial(const JetVar& v) const {
  DiffPoly r;
  for (const auto& [m, c] : terms_) {
    auto e = m.exponent(v);
    if (e) r.add_term(m.without_one(v), c * e);
  }
  return r;
}

DiffPoly DiffPoly::partial_independent(std::size_t i) const {
  DiffPoly r;
  for (const auto& [m, c] : terms_) {
    auto e = m.independent_powers()[i];
    if (e) r.add_term(m.without_independent_one(i), c * e);
  }
  return r;
}

DiffPoly DiffPoly::filter_degree(const std::function<bool(DepId)>& pred, unsigned lo,
                                 unsigned hi) const {
  DiffPoly r;
  for (const auto& [m, c] : terms_) {
    auto d = monomial_degree_in(m, pred);
    if (d >= lo && d <= hi) r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

DiffPoly DiffPoly::rename(const std::function<DepId(DepId)>& map) const {
  DiffPoly r;
  for (const auto& [m, c] : terms_) {
    Monomial n;
    for (std::size_t i = 0; i < kMaxIndependents; ++i)
      if (m.independent_powers()[i]) n = n * Monomial::of_independent(i, m.independent_powers()[i]);
    for (const auto& [v, e] : m.factors()) n = n * Monomial::of(JetVar{map(v.dep), v.idx}, e);
    r.add_term(n, c);
  }
  return r;
}

DiffPoly substitute(const DiffPoly& p, const std::function<DiffPoly(const JetVar&)>& image,
                    const std::function<void(DiffPoly&)>& truncate) {
  DiffPoly out;
  std::map<JetVar, DiffPoly> cache;
  for (const auto& [m, c] : p.terms()) {
    Monomial xs;
    for (std::size_t i = 0; i < kMaxIndependents; ++i)
      if (m.independent_powers()[i]) xs = xs * Monomial::of_independent(i, m.independent_powers()[i]);
    DiffPoly t = DiffPoly::term(c, xs);
    for (const auto& [v, e] : m.factors()) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, image(v)).first;
      for (std::uint32_t k = 0; k < e; ++k) {
        t = t * it->second;
        if (truncate) truncate(t);
        if (t.is_zero()) break;
      }
      if (t.is_zero()) break;
    }
    out += t;
  }
  return out;
}

bool VectorFunction::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const DiffPoly& p) { return p.is_zero(); });
}

VectorFunction& VectorFunction::operator+=(const VectorFunction& o) {
  if (o.size() != size()) throw Error(ErrorKind::dimension_mismatch, "vector length mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

VectorFunction& VectorFunction::operator-=(const VectorFunction& o) {
  if (o.size() != size()) throw Error(ErrorKind::dimension_mismatch, "vector length mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

VectorFunction operator*(const Rational& c, VectorFunction a) {
  for (auto& e : a.entries_) e *= c;
  return a;
}

VectorFunction VectorFunction::operator-() const {
  VectorFunction r = *this;
  for (auto& e : r.entries_) e = -e;
  return r;
}

VectorFunction VectorFunction::of_dependents(const std::vector<DepId>& deps) {
  VectorFunction r(deps.size());
  for (std::size_t i = 0; i < deps.size(); ++i) r[i] = DiffPoly::var(deps[i]);
  return r;
}

DiffPoly pairing(const VectorFunction& a, const VectorFunction& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::dimension_mismatch, "pairing length mismatch");
  DiffPoly s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace hamcheck
