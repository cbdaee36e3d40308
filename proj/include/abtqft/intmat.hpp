#pragma once

// Small dense integer matrices: Hermite and Smith normal forms, integer
// kernels and saturation. Entries are 64-bit with overflow checks; the
// lattices handled here are tiny, so exceeding the range is a usage error.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;  // row-major, rows of equal length

namespace detail {

inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer matrix arithmetic overflow");
  return r;
}
inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer matrix arithmetic overflow");
  return r;
}

// row_a <- row_a + c * row_b
inline void axpy(IntVec& a, const IntVec& b, long long c) {
  if (c == 0) return;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = checked_add(a[i], checked_mul(c, b[i]));
}

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

inline std::size_t ncols(const IntMat& A, std::size_t fallback = 0) { return A.empty() ? fallback : A[0].size(); }

inline IntMat zeros(std::size_t r, std::size_t c) { return IntMat(r, IntVec(c, 0)); }

inline IntMat identity(std::size_t n) {
  IntMat I = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline IntMat transpose(const IntMat& A, std::size_t cols_if_empty = 0) {
  const std::size_t r = A.size(), c = ncols(A, cols_if_empty);
  IntMat T = zeros(c, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) T[j][i] = A[i][j];
  return T;
}

inline IntMat matmul(const IntMat& A, const IntMat& B) {
  if (A.empty()) return {};
  const std::size_t n = A[0].size();
  if (B.size() != n) throw std::invalid_argument("matmul: dimension mismatch");
  const std::size_t m = ncols(B);
  IntMat C = zeros(A.size(), m);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (A[i][k] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] = detail::checked_add(C[i][j], detail::checked_mul(A[i][k], B[k][j]));
    }
  return C;
}

inline IntVec matvec(const IntMat& A, const IntVec& x) {
  IntVec y(A.size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    for (std::size_t j = 0; j < x.size(); ++j) y[i] = detail::checked_add(y[i], detail::checked_mul(A[i][j], x[j]));
  }
  return y;
}

/// Row-style Hermite normal form with transform: U * A = H, U unimodular.
/// Pivots are positive, entries above a pivot lie in [0, pivot), zero rows last.
struct HermiteResult {
  IntMat H;
  IntMat U;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

inline HermiteResult hermite(const IntMat& A, std::size_t cols_if_empty = 0) {
  const std::size_t m = A.size(), n = ncols(A, cols_if_empty);
  HermiteResult res{A, identity(m), 0, {}};
  IntMat& H = res.H;
  IntMat& U = res.U;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < m; ++col) {
    // Euclid on column col among rows r..m-1
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (H[i][col] != 0 && (best == m || std::llabs(H[i][col]) < std::llabs(H[best][col]))) best = i;
      if (best == m) break;
      std::swap(H[r], H[best]);
      std::swap(U[r], U[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (H[i][col] == 0) continue;
        long long q = detail::floor_div(H[i][col], H[r][col]);
        detail::axpy(H[i], H[r], -q);
        detail::axpy(U[i], U[r], -q);
        if (H[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (H[r][col] == 0) continue;
    if (H[r][col] < 0) {
      for (auto& x : H[r]) x = -x;
      for (auto& x : U[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      long long q = detail::floor_div(H[i][col], H[r][col]);
      detail::axpy(H[i], H[r], -q);
      detail::axpy(U[i], U[r], -q);
    }
    res.pivots.push_back(col);
    ++r;
  }
  res.rank = r;
  return res;
}

/// Canonical row basis (nonzero HNF rows) of the lattice spanned by the rows of A.
inline IntMat row_basis(const IntMat& A, std::size_t cols_if_empty = 0) {
  auto h = hermite(A, cols_if_empty);
  return IntMat(h.H.begin(), h.H.begin() + static_cast<long>(h.rank));
}

inline std::size_t rank(const IntMat& A) { return hermite(A).rank; }

/// Basis of {y : y * A = 0} (saturated).
inline IntMat left_kernel(const IntMat& A, std::size_t cols_if_empty = 0) {
  auto h = hermite(A, cols_if_empty);
  IntMat K(h.U.begin() + static_cast<long>(h.rank), h.U.end());
  return row_basis(K, A.size());
}

/// Basis of {x : A * x = 0} (saturated); n is the number of columns.
inline IntMat right_kernel(const IntMat& A, std::size_t n) {
  if (A.empty()) return identity(n);
  return left_kernel(transpose(A), n);
}

/// Primitive hull of the row lattice: (span_Q rows) intersected with Z^n.
inline IntMat saturate(const IntMat& A, std::size_t n) {
  IntMat K = right_kernel(A, n);
  return right_kernel(K, n);
}

/// Smith invariant factors (nonzero ones, in divisibility order).
inline IntVec smith_invariants(IntMat A) {
  const std::size_t m = A.size(), n = ncols(A);
  IntVec out;
  std::size_t t = 0;
  while (t < m && t < n) {
    // pick the smallest nonzero entry in the remaining block
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (A[i][j] != 0 && (pi == m || std::llabs(A[i][j]) < std::llabs(A[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == m) break;
    std::swap(A[t], A[pi]);
    for (auto& row : A) std::swap(row[t], row[pj]);
    bool clean = true;
    for (std::size_t i = t + 1; i < m; ++i) {
      long long q = detail::floor_div(A[i][t], A[t][t]);
      detail::axpy(A[i], A[t], -q);
      if (A[i][t] != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      long long q = detail::floor_div(A[t][j], A[t][t]);
      for (std::size_t i = 0; i < m; ++i) A[i][j] = detail::checked_add(A[i][j], detail::checked_mul(-q, A[i][t]));
      if (A[t][j] != 0) clean = false;
    }
    if (!clean) continue;
    // divisibility condition
    bool divides = true;
    for (std::size_t i = t + 1; i < m && divides; ++i)
      for (std::size_t j = t + 1; j < n; ++j)
        if (A[i][j] % A[t][t] != 0) {
          detail::axpy(A[t], A[i], 1);
          divides = false;
          break;
        }
    if (!divides) continue;
    out.push_back(std::llabs(A[t][t]));
    ++t;
  }
  return out;
}

/// True when the rows are linearly independent and span a direct summand.
inline bool is_primitive_basis(const IntMat& A) {
  if (A.empty()) return true;
  auto inv = smith_invariants(A);
  if (inv.size() != A.size()) return false;
  return std::all_of(inv.begin(), inv.end(), [](long long d) { return d == 1; });
}

inline long long gcd_all(const IntVec& v) {
  long long g = 0;
  for (auto x : v) g = std::gcd(g, std::llabs(x));
  return g;
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
struct Bezout {
  long long g, s, t;
};
inline Bezout bezout(long long a, long long b) {
  long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline std::string to_string(const IntMat& A) {
  std::string s = "[";
  for (std::size_t i = 0; i < A.size(); ++i) {
    s += (i ? ",[" : "[");
    for (std::size_t j = 0; j < A[i].size(); ++j) s += (j ? "," : "") + std::to_string(A[i][j]);
    s += "]";
  }
  return s + "]";
}

}  // namespace abtqft
