#include "hamcheck/render.hpp"

#include <sstream>

namespace hamcheck {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

std::string dep_name(const Frame& frame, DepId d) {
  if (is_marker(d)) return "F" + std::to_string(d - kMarkerBase + 1);
  if (d < frame.num_dependents()) return frame.dependent(d).name;
  return "dep" + std::to_string(d);
}

std::string monomial_body(const Frame& frame, const Monomial& m) {
  std::string out;
  auto append = [&](const std::string& s) {
    if (!out.empty()) out += "*";
    out += s;
  };
  for (std::size_t i = 0; i < frame.num_independents(); ++i) {
    auto e = m.independent_powers()[i];
    if (!e) continue;
    append(frame.independent(i) + (e > 1 ? "^" + std::to_string(e) : ""));
  }
  for (const auto& [v, e] : m.factors())
    append(to_string(frame, v) + (e > 1 ? "^" + std::to_string(e) : ""));
  return out;
}

// Magnitude of one signed term; `body` may be empty (pure constant).
std::string term_text(const Rational& magnitude, const std::string& body) {
  if (body.empty()) return to_string(magnitude);
  if (magnitude == 1) return body;
  return to_string(magnitude) + "*" + body;
}

void append_signed(std::string& out, bool negative, const std::string& text) {
  if (out.empty()) out = negative ? "-" + text : text;
  else out += (negative ? " - " : " + ") + text;
}

}  // namespace

std::string to_string(const Frame& frame, const JetVar& v) {
  std::string s = dep_name(frame, v.dep);
  if (v.idx.is_zero()) return s;
  s += "_";
  for (std::size_t i = 0; i < frame.num_independents(); ++i)
    s += std::string(v.idx[i], frame.independent(i)[0]);
  return s;
}

std::string to_string(const Frame& frame, const MultiIndex& derivative) {
  std::string out;
  for (std::size_t i = 0; i < frame.num_independents(); ++i) {
    auto k = derivative[i];
    if (!k) continue;
    if (!out.empty()) out += "*";
    out += "D" + frame.independent(i) + (k > 1 ? "^" + std::to_string(k) : "");
  }
  return out;
}

std::string to_string(const Frame& frame, const DiffPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms())
    append_signed(out, c < 0, term_text(abs(c), monomial_body(frame, m)));
  return out;
}

std::string to_string(const Frame& frame, const VectorFunction& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(frame, v[i]);
  }
  return out + "]";
}

std::string to_string(const Frame& frame, const CDiffOp::Entry& e) {
  std::string out;
  for (const auto& [sigma, a] : e) {
    if (sigma.is_zero()) {
      for (const auto& [m, c] : a.terms())
        append_signed(out, c < 0, term_text(abs(c), monomial_body(frame, m)));
      continue;
    }
    const std::string d = to_string(frame, sigma);
    if (a.size() == 1) {
      const auto& [m, c] = *a.terms().begin();
      std::string body = monomial_body(frame, m);
      std::string coef = term_text(abs(c), body);
      bool unit = body.empty() && abs(c) == 1;
      append_signed(out, c < 0, unit ? d : coef + "*" + d);
    } else {
      append_signed(out, false, "(" + to_string(frame, a) + ")*" + d);
    }
  }
  return out.empty() ? "0" : out;
}

std::string to_string(const Frame& frame, const CDiffOp& op) {
  if (op.rows() == 1 && op.cols() == 1) return to_string(frame, op.entry(0, 0));
  std::string out = "[";
  for (std::size_t i = 0; i < op.rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t j = 0; j < op.cols(); ++j) {
      if (j) out += ", ";
      out += to_string(frame, op.entry(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace hamcheck
