#ifndef HAMCHECK_RENDER_HPP
#define HAMCHECK_RENDER_HPP

#include <string>

#include "hamcheck/cdop.hpp"
#include "hamcheck/diffpoly.hpp"

namespace hamcheck {

// Canonical text forms. Every rendering here parses back to the same value
// through the hamcheck input language.
std::string to_string(const Rational& q);
std::string to_string(const Frame& frame, const JetVar& v);
std::string to_string(const Frame& frame, const MultiIndex& derivative);  // Dx^2*Dt
std::string to_string(const Frame& frame, const DiffPoly& p);
std::string to_string(const Frame& frame, const VectorFunction& v);      // [a, b]
std::string to_string(const Frame& frame, const CDiffOp::Entry& e);
std::string to_string(const Frame& frame, const CDiffOp& op);            // [[..], [..]]

}  // namespace hamcheck

#endif  // HAMCHECK_RENDER_HPP
