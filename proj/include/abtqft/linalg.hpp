#pragma once

// Exact linear algebra over Q(zeta_M): dense matrices, Gauss-Jordan
// inversion, and an incremental sparse row reducer used for quotient
// spaces and commutants.

#include "abtqft/cyclotomic.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace abtqft {

/// Dense matrix of CycNum entries of a common order.
class CycMatrix {
 public:
  CycMatrix() = default;
  CycMatrix(std::size_t rows, std::size_t cols, int M) : rows_(rows), cols_(cols), M_(M), a_(rows * cols, CycNum::zero(M)) {}

  static CycMatrix identity(std::size_t n, int M) {
    CycMatrix I(n, n, M);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = CycNum::one(M);
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int order() const { return M_; }

  CycNum& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const CycNum& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend bool operator==(const CycMatrix& x, const CycMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const CycMatrix& x, const CycMatrix& y) { return !(x == y); }

  friend CycMatrix operator*(const CycMatrix& x, const CycMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("CycMatrix: dimension mismatch");
    CycMatrix r(x.rows_, y.cols_, x.M_);
    std::vector<char> ynz(y.a_.size());
    for (std::size_t i = 0; i < y.a_.size(); ++i) ynz[i] = !y.a_[i].is_zero();
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const CycNum& xik = x(i, k);
        if (xik.is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j)
          if (ynz[k * y.cols_ + j]) r(i, j) += xik * y(k, j);
      }
    return r;
  }

  friend CycMatrix operator*(const CycNum& s, CycMatrix m) {
    for (auto& e : m.a_) e = s * e;
    return m;
  }

  friend CycMatrix operator+(CycMatrix x, const CycMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("CycMatrix: dimension mismatch");
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    return x;
  }
  friend CycMatrix operator-(CycMatrix x, const CycMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("CycMatrix: dimension mismatch");
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }

  bool is_zero() const {
    for (const auto& e : a_)
      if (!e.is_zero()) return false;
    return true;
  }

  CycMatrix conj_transpose() const {
    CycMatrix r(cols_, rows_, M_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j).conj();
    return r;
  }

  std::vector<CycNum> apply(const std::vector<CycNum>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("CycMatrix: vector length mismatch");
    std::vector<CycNum> r(rows_, CycNum::zero(M_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const CycNum& e = (*this)(i, j);
        if (!e.is_zero() && !v[j].is_zero()) r[i] += e * v[j];
      }
    return r;
  }

  /// Kronecker product; the left factor indexes the most significant block.
  friend CycMatrix kron(const CycMatrix& x, const CycMatrix& y) {
    CycMatrix r(x.rows_ * y.rows_, x.cols_ * y.cols_, x.M_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < x.cols_; ++j) {
        const CycNum& e = x(i, j);
        if (e.is_zero()) continue;
        for (std::size_t k = 0; k < y.rows_; ++k)
          for (std::size_t l = 0; l < y.cols_; ++l) {
            const CycNum& f = y(k, l);
            if (!f.is_zero()) r(i * y.rows_ + k, j * y.cols_ + l) = e * f;
          }
      }
    return r;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  int M_ = 0;
  std::vector<CycNum> a_;
};

/// Gauss-Jordan inverse; throws ArithmeticError if singular.
inline CycMatrix inverse(const CycMatrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("inverse: matrix not square");
  const int M = A.order();
  CycMatrix W = A, R = CycMatrix::identity(n, M);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (!W(r, col).is_zero()) {
        piv = r;
        break;
      }
    if (piv == n) throw ArithmeticError("inverse: singular matrix");
    if (piv != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(W(col, c), W(piv, c));
        std::swap(R(col, c), R(piv, c));
      }
    CycNum inv = W(col, col).inverse();
    for (std::size_t c = 0; c < n; ++c) {
      if (!W(col, c).is_zero()) W(col, c) = W(col, c) * inv;
      if (!R(col, c).is_zero()) R(col, c) = R(col, c) * inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || W(r, col).is_zero()) continue;
      CycNum f = W(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        if (!W(col, c).is_zero()) W(r, c) -= f * W(col, c);
        if (!R(col, c).is_zero()) R(r, c) -= f * R(col, c);
      }
    }
  }
  return R;
}

/// Incremental row reduction for sparse rows over Q(zeta_M).
///
/// Each stored row is keyed by its largest column, has coefficient 1 there,
/// and only smaller columns elsewhere, so full reduction of a vector is a
/// single descending sweep. Binomial input rows stay binomial.
class SparseReducer {
 public:
  using Row = std::map<std::size_t, CycNum>;

  /// Reduces r against the stored rows (in place).
  void reduce(Row& r) const {
    auto it = r.end();
    while (it != r.begin()) {
      --it;
      auto pit = pivots_.find(it->first);
      if (pit == pivots_.end()) continue;
      const std::size_t col = it->first;
      const CycNum c = it->second;
      for (const auto& [j, v] : pit->second) {
        auto [jt, inserted] = r.try_emplace(j, CycNum::zero(c.order()));
        jt->second -= c * v;
        if (jt->second.is_zero()) r.erase(jt);
      }
      it = r.lower_bound(col);
    }
  }

  /// Adds a row; returns false if it was already in the span.
  bool add(Row r) {
    reduce(r);
    if (r.empty()) return false;
    auto last = std::prev(r.end());
    const std::size_t col = last->first;
    const CycNum inv = last->second.inverse();
    for (auto& [j, v] : r) v = v * inv;
    pivots_.emplace(col, std::move(r));
    return true;
  }

  std::size_t rank() const { return pivots_.size(); }
  bool is_pivot(std::size_t col) const { return pivots_.count(col) != 0; }

 private:
  std::unordered_map<std::size_t, Row> pivots_;
};

/// Dimension of the joint commutant {X : X A = A X for all A}.
inline std::size_t commutant_dim(const std::vector<CycMatrix>& mats) {
  if (mats.empty()) throw std::invalid_argument("commutant_dim: no matrices");
  const std::size_t n = mats[0].rows();
  for (const auto& A : mats)
    if (A.rows() != n || A.cols() != n) throw std::invalid_argument("commutant_dim: matrices must be square of equal size");
  const int M = mats[0].order();
  SparseReducer red;
  // unknown X_{ab} has index a * n + b; equation (i, j): sum_k X_ik A_kj - A_ik X_kj = 0
  for (const auto& A : mats)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        SparseReducer::Row row;
        for (std::size_t k = 0; k < n; ++k) {
          if (!A(k, j).is_zero()) {
            auto [it, ins] = row.try_emplace(i * n + k, CycNum::zero(M));
            it->second += A(k, j);
          }
          if (!A(i, k).is_zero()) {
            auto [it, ins] = row.try_emplace(k * n + j, CycNum::zero(M));
            it->second -= A(i, k);
          }
        }
        for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
        if (!row.empty()) red.add(std::move(row));
      }
  return n * n - red.rank();
}

}  // namespace abtqft
