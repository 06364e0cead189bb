#include "hamcheck/jet.hpp"

#include <cctype>
#include <set>

#include "hamcheck/error.hpp"

namespace hamcheck {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_frame: return "InvalidFrame";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::non_orthonomic: return "NonOrthonomic";
    case ErrorKind::passivity_failure: return "PassivityFailure";
    case ErrorKind::mismatched_solved_form: return "MismatchedSolvedForm";
    case ErrorKind::not_on_equation: return "NotOnEquation";
    case ErrorKind::not_conserved: return "NotConserved";
    case ErrorKind::constraint_not_orthonomic: return "ConstraintNotOrthonomic";
    case ErrorKind::home_mismatch: return "HomeMismatch";
    case ErrorKind::certification_failure: return "CertificationFailure";
    case ErrorKind::need_successor: return "NeedSuccessor";
    case ErrorKind::precondition: return "PreconditionFailed";
  }
  return "Unknown";
}

Rational multinomial_binomial(const MultiIndex& sigma, const MultiIndex& rho) {
  Rational r = 1;
  for (std::size_t i = 0; i < kMaxIndependents; ++i) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), sigma[i], rho[i]);
    r *= b;
  }
  return r;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& sigma) {
  std::vector<MultiIndex> out{MultiIndex{}};
  for (std::size_t i = 0; i < kMaxIndependents; ++i) {
    std::vector<MultiIndex> next;
    for (const auto& m : out) {
      for (std::uint16_t k = 0; k <= sigma[i]; ++k) {
        MultiIndex n = m;
        n.set(i, k);
        next.push_back(n);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<MultiIndex> indices_up_to(std::size_t n, unsigned max_order) {
  std::vector<MultiIndex> out{MultiIndex{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<MultiIndex> next;
    for (const auto& m : out) {
      for (unsigned k = 0; m.order() + k <= max_order; ++k) {
        MultiIndex x = m;
        x.set(i, static_cast<std::uint16_t>(k));
        next.push_back(x);
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Frame::Frame(std::vector<std::string> independents, std::vector<Dependent> dependents)
    : independents_(std::move(independents)), dependents_(std::move(dependents)) {
  if (independents_.empty())
    throw Error(ErrorKind::invalid_frame, "frame needs at least one independent variable");
  if (independents_.size() > kMaxIndependents)
    throw Error(ErrorKind::invalid_frame, "frame supports at most 4 independent variables");
  if (dependents_.empty())
    throw Error(ErrorKind::invalid_frame, "frame needs at least one dependent variable");
  std::set<std::string> seen;
  for (const auto& x : independents_) {
    // Jet suffixes are spelled letter by letter, so independents are single letters.
    if (x.size() != 1 || !std::isalpha(static_cast<unsigned char>(x[0])))
      throw Error(ErrorKind::invalid_frame, "independent '" + x + "' must be a single letter");
    if (!seen.insert(x).second)
      throw Error(ErrorKind::invalid_frame, "duplicate name '" + x + "'");
  }
  for (const auto& d : dependents_) {
    if (!valid_identifier(d.name))
      throw Error(ErrorKind::invalid_frame, "dependent '" + d.name + "' is not an identifier");
    if (!seen.insert(d.name).second)
      throw Error(ErrorKind::invalid_frame, "duplicate name '" + d.name + "'");
  }
}

std::optional<std::size_t> Frame::find_independent(const std::string& name) const {
  for (std::size_t i = 0; i < independents_.size(); ++i)
    if (independents_[i] == name) return i;
  return std::nullopt;
}

std::optional<DepId> Frame::find_dependent(const std::string& name) const {
  for (std::size_t i = 0; i < dependents_.size(); ++i)
    if (dependents_[i].name == name) return static_cast<DepId>(i);
  return std::nullopt;
}

std::vector<DepId> Frame::physical() const {
  std::vector<DepId> out;
  for (std::size_t i = 0; i < dependents_.size(); ++i)
    if (dependents_[i].kind == DepKind::physical) out.push_back(static_cast<DepId>(i));
  return out;
}

Frame Frame::extended(const std::vector<Dependent>& extra) const {
  auto deps = dependents_;
  deps.insert(deps.end(), extra.begin(), extra.end());
  return Frame(independents_, std::move(deps));
}

std::optional<JetVar> Frame::parse_jet(const std::string& text) const {
  auto us = text.find('_');
  auto dep = find_dependent(text.substr(0, us));
  if (!dep) return std::nullopt;
  JetVar v{*dep, {}};
  if (us == std::string::npos) return v;
  std::string suffix = text.substr(us + 1);
  if (suffix.empty()) return std::nullopt;
  for (char c : suffix) {
    auto i = find_independent(std::string(1, c));
    if (!i) return std::nullopt;
    v.idx = v.idx.plus_unit(*i);
  }
  return v;
}

}  // namespace hamcheck
