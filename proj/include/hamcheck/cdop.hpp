#ifndef HAMCHECK_CDOP_HPP
#define HAMCHECK_CDOP_HPP

#include <map>
#include <vector>

#include "hamcheck/diffpoly.hpp"
#include "hamcheck/jetalg.hpp"

namespace hamcheck {

// Matrix operator in total derivatives, always in right-normal form
// sum_sigma a_sigma D_sigma (coefficients to the left). Structural equality of
// this form is operator equality on the free jet space.
class CDiffOp {
 public:
  using Entry = std::map<MultiIndex, DiffPoly>;

  CDiffOp() : CDiffOp(1, 1) {}
  CDiffOp(std::size_t rows, std::size_t cols);

  static CDiffOp zero(std::size_t rows, std::size_t cols) { return CDiffOp(rows, cols); }
  static CDiffOp identity(std::size_t n);
  static CDiffOp multiplication(const DiffPoly& a);
  static CDiffOp derivative(const MultiIndex& sigma);
  // Column operator (n x 1) of multiplications.
  static CDiffOp column(const VectorFunction& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Entry& entry(std::size_t i, std::size_t j) const { return entries_.at(i * cols_ + j); }
  void add(std::size_t i, std::size_t j, const MultiIndex& sigma, const DiffPoly& a);
  void set_entry(std::size_t i, std::size_t j, Entry e);

  bool is_zero() const;
  // Highest |sigma| over all entries.
  unsigned order() const;

  // Applies f to every coefficient, dropping zeros.
  CDiffOp map_coefficients(const std::function<DiffPoly(const DiffPoly&)>& f) const;
  std::vector<DiffPoly> coefficients() const;

  CDiffOp block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CDiffOp& b);

  CDiffOp& operator+=(const CDiffOp& o);
  CDiffOp& operator-=(const CDiffOp& o);
  friend CDiffOp operator+(CDiffOp a, const CDiffOp& b) { return a += b; }
  friend CDiffOp operator-(CDiffOp a, const CDiffOp& b) { return a -= b; }
  friend CDiffOp operator*(const Rational& c, const CDiffOp& a);
  CDiffOp operator-() const;

  bool operator==(const CDiffOp& o) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Entry> entries_;
};

VectorFunction apply(const CDiffOp& op, const VectorFunction& v);
CDiffOp compose(const CDiffOp& lhs, const CDiffOp& rhs);
CDiffOp adjoint(const CDiffOp& op);
CDiffOp transpose(const CDiffOp& op);

// (op*)* == op.
bool transpose_conjugation_check(const CDiffOp& op);

// Horizontal / vertical concatenation of blocks.
CDiffOp hstack(const std::vector<CDiffOp>& blocks);
CDiffOp vstack(const std::vector<CDiffOp>& blocks);

}  // namespace hamcheck

#endif  // HAMCHECK_CDOP_HPP
