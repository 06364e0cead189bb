#include "hamcheck/cdop.hpp"

#include "hamcheck/error.hpp"

namespace hamcheck {

CDiffOp::CDiffOp(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0)
    throw Error(ErrorKind::dimension_mismatch, "operator dimensions must be positive");
}

CDiffOp CDiffOp::identity(std::size_t n) {
  CDiffOp op(n, n);
  for (std::size_t i = 0; i < n; ++i) op.add(i, i, {}, DiffPoly(1));
  return op;
}

CDiffOp CDiffOp::multiplication(const DiffPoly& a) {
  CDiffOp op(1, 1);
  op.add(0, 0, {}, a);
  return op;
}

CDiffOp CDiffOp::derivative(const MultiIndex& sigma) {
  CDiffOp op(1, 1);
  op.add(0, 0, sigma, DiffPoly(1));
  return op;
}

CDiffOp CDiffOp::column(const VectorFunction& v) {
  CDiffOp op(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) op.add(i, 0, {}, v[i]);
  return op;
}

void CDiffOp::add(std::size_t i, std::size_t j, const MultiIndex& sigma, const DiffPoly& a) {
  if (a.is_zero()) return;
  auto& e = entries_.at(i * cols_ + j);
  auto [it, inserted] = e.try_emplace(sigma, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) e.erase(it);
  }
}

void CDiffOp::set_entry(std::size_t i, std::size_t j, Entry e) {
  std::erase_if(e, [](const auto& kv) { return kv.second.is_zero(); });
  entries_.at(i * cols_ + j) = std::move(e);
}

bool CDiffOp::is_zero() const {
  for (const auto& e : entries_)
    if (!e.empty()) return false;
  return true;
}

unsigned CDiffOp::order() const {
  unsigned o = 0;
  for (const auto& e : entries_)
    for (const auto& [sigma, a] : e) o = std::max(o, sigma.order());
  return o;
}

CDiffOp CDiffOp::map_coefficients(const std::function<DiffPoly(const DiffPoly&)>& f) const {
  CDiffOp r(rows_, cols_);
  for (std::size_t k = 0; k < entries_.size(); ++k)
    for (const auto& [sigma, a] : entries_[k]) r.add(k / cols_, k % cols_, sigma, f(a));
  return r;
}

std::vector<DiffPoly> CDiffOp::coefficients() const {
  std::vector<DiffPoly> out;
  for (const auto& e : entries_)
    for (const auto& [sigma, a] : e) out.push_back(a);
  return out;
}

CDiffOp CDiffOp::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_)
    throw Error(ErrorKind::dimension_mismatch, "block out of range");
  CDiffOp b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b.entries_[i * nc + j] = entry(r0 + i, c0 + j);
  return b;
}

void CDiffOp::set_block(std::size_t r0, std::size_t c0, const CDiffOp& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
    throw Error(ErrorKind::dimension_mismatch, "block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) entries_[(r0 + i) * cols_ + c0 + j] = b.entry(i, j);
}

CDiffOp& CDiffOp::operator+=(const CDiffOp& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_)
    throw Error(ErrorKind::dimension_mismatch, "operator sum dimension mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k)
    for (const auto& [sigma, a] : o.entries_[k]) add(k / cols_, k % cols_, sigma, a);
  return *this;
}

CDiffOp& CDiffOp::operator-=(const CDiffOp& o) { return *this += -o; }

CDiffOp operator*(const Rational& c, const CDiffOp& a) {
  return a.map_coefficients([&](const DiffPoly& p) { return c * p; });
}

CDiffOp CDiffOp::operator-() const {
  return map_coefficients([](const DiffPoly& p) { return -p; });
}

namespace {

// (a D_sigma) o (b D_tau) = sum_{rho <= sigma} C(sigma, rho) a D_rho(b) D_{sigma - rho + tau}
void accumulate_product(CDiffOp::Entry& out, const CDiffOp::Entry& lhs, const CDiffOp::Entry& rhs) {
  auto add = [&](const MultiIndex& s, const DiffPoly& a) {
    if (a.is_zero()) return;
    auto [it, inserted] = out.try_emplace(s, a);
    if (!inserted) it->second += a;
  };
  for (const auto& [sigma, a] : lhs) {
    for (const auto& [tau, b] : rhs) {
      for (const auto& rho : sub_indices(sigma)) {
        DiffPoly db = total_derivative(rho, b);
        if (db.is_zero()) continue;
        add(sigma - rho + tau, multinomial_binomial(sigma, rho) * (a * db));
      }
    }
  }
}

}  // namespace

VectorFunction apply(const CDiffOp& op, const VectorFunction& v) {
  if (op.cols() != v.size())
    throw Error(ErrorKind::dimension_mismatch, "apply: operator has " + std::to_string(op.cols()) +
                                                   " columns, vector has " +
                                                   std::to_string(v.size()) + " entries");
  VectorFunction r(op.rows());
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = 0; j < op.cols(); ++j)
      for (const auto& [sigma, a] : op.entry(i, j)) r[i] += a * total_derivative(sigma, v[j]);
  return r;
}

CDiffOp compose(const CDiffOp& lhs, const CDiffOp& rhs) {
  if (lhs.cols() != rhs.rows())
    throw Error(ErrorKind::dimension_mismatch, "compose: inner dimensions differ");
  CDiffOp r(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < rhs.cols(); ++k) {
      CDiffOp::Entry acc;
      for (std::size_t j = 0; j < lhs.cols(); ++j)
        accumulate_product(acc, lhs.entry(i, j), rhs.entry(j, k));
      r.set_entry(i, k, std::move(acc));
    }
  }
  return r;
}

CDiffOp adjoint(const CDiffOp& op) {
  CDiffOp r(op.cols(), op.rows());
  for (std::size_t i = 0; i < op.rows(); ++i) {
    for (std::size_t j = 0; j < op.cols(); ++j) {
      // (a D_sigma)* = (-1)^|sigma| sum_rho C(sigma, rho) D_rho(a) D_{sigma - rho}
      for (const auto& [sigma, a] : op.entry(i, j)) {
        const bool odd = sigma.order() % 2;
        for (const auto& rho : sub_indices(sigma)) {
          DiffPoly da = total_derivative(rho, a);
          if (da.is_zero()) continue;
          da *= multinomial_binomial(sigma, rho);
          r.add(j, i, sigma - rho, odd ? -da : da);
        }
      }
    }
  }
  return r;
}

CDiffOp transpose(const CDiffOp& op) {
  CDiffOp r(op.cols(), op.rows());
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = 0; j < op.cols(); ++j) r.set_entry(j, i, op.entry(i, j));
  return r;
}

bool transpose_conjugation_check(const CDiffOp& op) { return adjoint(adjoint(op)) == op; }

CDiffOp hstack(const std::vector<CDiffOp>& blocks) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != blocks.front().rows())
      throw Error(ErrorKind::dimension_mismatch, "hstack: row counts differ");
    cols += b.cols();
  }
  CDiffOp r(blocks.front().rows(), cols);
  std::size_t c = 0;
  for (const auto& b : blocks) {
    r.set_block(0, c, b);
    c += b.cols();
  }
  return r;
}

CDiffOp vstack(const std::vector<CDiffOp>& blocks) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != blocks.front().cols())
      throw Error(ErrorKind::dimension_mismatch, "vstack: column counts differ");
    rows += b.rows();
  }
  CDiffOp r(rows, blocks.front().cols());
  std::size_t row = 0;
  for (const auto& b : blocks) {
    r.set_block(row, 0, b);
    row += b.rows();
  }
  return r;
}

}  // namespace hamcheck
