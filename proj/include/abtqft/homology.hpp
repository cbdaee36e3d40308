#pragma once

// H_1 of a surface with one boundary component as the symplectic lattice
// Z^{2g} with basis a_1..a_g, b_1..b_g and a_i . b_i = 1; Lagrangians,
// Lagrangian correspondences and their composition.

#include "abtqft/intmat.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft {

/// Raised when a sublattice fails to be Lagrangian where one is required.
class LagrangianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::size_t a_index(int /*g*/, int i) { return static_cast<std::size_t>(i); }
inline std::size_t b_index(int g, int i) { return static_cast<std::size_t>(g + i); }

/// Standard intersection form J of genus g.
inline IntMat standard_form(int g) {
  IntMat J = zeros(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    J[a_index(g, i)][b_index(g, i)] = 1;
    J[b_index(g, i)][a_index(g, i)] = -1;
  }
  return J;
}

inline IntMat block_diag(const IntMat& A, std::size_t na, const IntMat& B, std::size_t nb) {
  IntMat C = zeros(na + nb, na + nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) C[i][j] = A[i][j];
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) C[na + i][na + j] = B[i][j];
  return C;
}

/// Form (-J_minus) + J_plus on H_1(-Sigma_-) + H_1(Sigma_+).
inline IntMat difference_form(int g_minus, int g_plus) {
  IntMat Jm = standard_form(g_minus);
  for (auto& row : Jm)
    for (auto& x : row) x = -x;
  return block_diag(Jm, static_cast<std::size_t>(2 * g_minus), standard_form(g_plus), static_cast<std::size_t>(2 * g_plus));
}

/// x^T Omega y.
inline long long pairing(const IntVec& x, const IntVec& y, const IntMat& form) {
  if (x.size() != y.size() || x.size() != form.size()) throw std::invalid_argument("pairing: length mismatch");
  long long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (form[i][j] != 0) s = detail::checked_add(s, detail::checked_mul(x[i], detail::checked_mul(form[i][j], y[j])));
  }
  return s;
}

/// Standard intersection number x . y on Z^{2g}.
inline long long intersection(const IntVec& x, const IntVec& y) {
  if (x.size() != y.size() || x.size() % 2 != 0) throw std::invalid_argument("intersection: length mismatch");
  const int g = static_cast<int>(x.size() / 2);
  long long s = 0;
  for (int i = 0; i < g; ++i)
    s += x[a_index(g, i)] * y[b_index(g, i)] - x[b_index(g, i)] * y[a_index(g, i)];
  return s;
}

inline bool is_isotropic(const IntMat& rows, const IntMat& form) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (pairing(rows[i], rows[j], form) != 0) return false;
  return true;
}

/// Rank-n isotropic direct summand of Z^{2n} for the given form.
inline bool is_lagrangian_for(const IntMat& basis, const IntMat& form) {
  const std::size_t n2 = form.size();
  if (n2 % 2 != 0) return false;
  for (const auto& r : basis)
    if (r.size() != n2) return false;
  IntMat b = row_basis(basis, n2);
  if (b.size() != n2 / 2) return false;
  return is_isotropic(b, form) && is_primitive_basis(b);
}

inline bool is_lagrangian(const IntMat& basis, int g) { return is_lagrangian_for(basis, standard_form(g)); }

inline bool is_symplectic(const IntMat& f, const IntMat& form) {
  if (f.size() != form.size()) return false;
  return matmul(matmul(transpose(f), form), f) == form;
}

/// Inverse of a matrix preserving the standard form: f^{-1} = -J f^T J.
inline IntMat symplectic_inverse(const IntMat& f) {
  const int g = static_cast<int>(f.size() / 2);
  IntMat J = standard_form(g);
  IntMat r = matmul(matmul(J, transpose(f)), J);
  for (auto& row : r)
    for (auto& x : row) x = -x;
  return r;
}

/// Applies the column-convention matrix f to every row vector.
inline IntMat apply_rows(const IntMat& f, const IntMat& rows) {
  IntMat out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(matvec(f, r));
  return out;
}

/// Lagrangian sublattice with canonical HNF basis.
struct Lagrangian {
  int genus = 0;
  IntMat basis;

  static Lagrangian make(const IntMat& rows, int g) {
    if (!is_lagrangian(rows, g)) throw LagrangianError("rows do not span a Lagrangian of genus " + std::to_string(g));
    return {g, row_basis(rows, static_cast<std::size_t>(2 * g))};
  }
  /// The meridian Lagrangian <a_1, ..., a_g>.
  static Lagrangian meridians(int g) {
    IntMat rows;
    for (int i = 0; i < g; ++i) {
      IntVec v(static_cast<std::size_t>(2 * g), 0);
      v[a_index(g, i)] = 1;
      rows.push_back(v);
    }
    return {g, rows};
  }
  friend bool operator==(const Lagrangian& x, const Lagrangian& y) { return x.genus == y.genus && x.basis == y.basis; }
};

/// Sublattice of Z^{2g_-} + Z^{2g_+} (coordinates on H_1(-Sigma_-) + H_1(Sigma_+)).
struct Correspondence {
  int g_minus = 0;
  int g_plus = 0;
  IntMat basis;

  std::size_t dim() const { return static_cast<std::size_t>(2 * (g_minus + g_plus)); }
  IntMat form() const { return difference_form(g_minus, g_plus); }
  bool is_lagrangian() const { return is_lagrangian_for(basis, form()); }
  friend bool operator==(const Correspondence& x, const Correspondence& y) {
    return x.g_minus == y.g_minus && x.g_plus == y.g_plus && x.basis == y.basis;
  }
};

inline IntVec concat(const IntVec& x, const IntVec& y) {
  IntVec r = x;
  r.insert(r.end(), y.begin(), y.end());
  return r;
}

inline IntVec unit(std::size_t n, std::size_t i) {
  IntVec v(n, 0);
  v[i] = 1;
  return v;
}

/// Embeds Z^{2g} into Z^{2(g+1)} with a new handle inserted at position pos.
inline IntVec insert_handle(const IntVec& x, int pos) {
  const int g = static_cast<int>(x.size() / 2);
  if (pos < 0 || pos > g) throw std::out_of_range("insert_handle: bad position");
  IntVec r(static_cast<std::size_t>(2 * (g + 1)), 0);
  for (int i = 0; i < g; ++i) {
    int j = i < pos ? i : i + 1;
    r[a_index(g + 1, j)] = x[a_index(g, i)];
    r[b_index(g + 1, j)] = x[b_index(g, i)];
  }
  return r;
}

/// Deletes handle h from a vector of Z^{2g}.
inline IntVec remove_handle(const IntVec& x, int h) {
  const int g = static_cast<int>(x.size() / 2);
  if (h < 0 || h >= g) throw std::out_of_range("remove_handle: bad handle");
  IntVec r(static_cast<std::size_t>(2 * (g - 1)), 0);
  for (int i = 0, j = 0; i < g; ++i) {
    if (i == h) continue;
    r[a_index(g - 1, j)] = x[a_index(g, i)];
    r[b_index(g - 1, j)] = x[b_index(g, i)];
    ++j;
  }
  return r;
}

/// Vector alpha a_h + beta b_h in Z^{2g}.
inline IntVec handle_vector(int g, int h, long long alpha, long long beta) {
  IntVec v(static_cast<std::size_t>(2 * g), 0);
  v[a_index(g, h)] = alpha;
  v[b_index(g, h)] = beta;
  return v;
}

/// Correspondence {(-x, f x)} of the mapping cylinder of f (columns of f are images of a_i, b_i).
inline Correspondence correspondence_cylinder(const IntMat& f) {
  const int g = static_cast<int>(f.size() / 2);
  if (!is_symplectic(f, standard_form(g))) throw std::invalid_argument("cylinder: matrix does not preserve the intersection form");
  const std::size_t n = f.size();
  IntMat rows;
  for (std::size_t j = 0; j < n; ++j) {
    IntVec e = unit(n, j);
    IntVec minus_e(n, 0);
    minus_e[j] = -1;
    rows.push_back(concat(minus_e, matvec(f, e)));
  }
  return {g, g, row_basis(rows, 2 * n)};
}

/// Index-1 surgery from genus g adding a handle at position pos: {(-x, x)} + Z(0, mu).
inline Correspondence correspondence_index1(int g, int pos) {
  const std::size_t n = static_cast<std::size_t>(2 * g);
  IntMat rows;
  for (std::size_t j = 0; j < n; ++j) {
    IntVec minus_e(n, 0);
    minus_e[j] = -1;
    rows.push_back(concat(minus_e, insert_handle(unit(n, j), pos)));
  }
  rows.push_back(concat(IntVec(n, 0), handle_vector(g + 1, pos, 1, 0)));
  return {g, g + 1, row_basis(rows, n + n + 2)};
}

/// Index-2 surgery along gamma = alpha a_h + beta b_h: Z(gamma, 0) + identity on the other handles.
inline Correspondence correspondence_index2(int g, int h, long long alpha, long long beta) {
  if (g < 1 || h < 0 || h >= g) throw std::out_of_range("index2: bad handle");
  if (bezout(alpha, beta).g != 1) throw std::invalid_argument("index2: surgery class is not primitive");
  const std::size_t n = static_cast<std::size_t>(2 * g);
  IntMat rows;
  rows.push_back(concat(handle_vector(g, h, alpha, beta), IntVec(n - 2, 0)));
  for (int i = 0; i < g; ++i) {
    if (i == h) continue;
    for (std::size_t idx : {a_index(g, i), b_index(g, i)}) {
      IntVec minus_e(n, 0);
      minus_e[idx] = -1;
      rows.push_back(concat(minus_e, remove_handle(unit(n, idx), h)));
    }
  }
  return {g, g - 1, row_basis(rows, 2 * n - 2)};
}

namespace detail {

inline IntMat cols(const IntMat& A, std::size_t from, std::size_t to) {
  IntMat B;
  B.reserve(A.size());
  for (const auto& r : A) B.emplace_back(r.begin() + static_cast<long>(from), r.begin() + static_cast<long>(to));
  return B;
}

inline IntMat combine(const IntMat& coeffs, const IntMat& rows, std::size_t n) {
  IntMat out;
  for (const auto& c : coeffs) {
    IntVec v(n, 0);
    for (std::size_t i = 0; i < c.size(); ++i) axpy(v, rows[i], c[i]);
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// L_C . L: saturation of { y : exists x in L with (x, y) in L_C }.
inline Lagrangian lagrangian_compose(const Correspondence& LC, const Lagrangian& L) {
  if (L.genus != LC.g_minus) throw std::invalid_argument("lagrangian_compose: genus mismatch");
  const std::size_t nm = static_cast<std::size_t>(2 * LC.g_minus), np = static_cast<std::size_t>(2 * LC.g_plus);
  IntMat Cx = detail::cols(LC.basis, 0, nm), Cy = detail::cols(LC.basis, nm, nm + np);
  IntMat N = right_kernel(L.basis, nm);  // x in L  <=>  N x = 0
  IntMat test = N.empty() ? zeros(LC.basis.size(), 0) : matmul(Cx, transpose(N));
  IntMat K = left_kernel(test, N.size());
  IntMat Y = detail::combine(K, Cy, np);
  IntMat sat = np == 0 ? IntMat{} : row_basis(saturate(Y, np), np);
  return {LC.g_plus, sat};
}

/// Relation composition: {(x, z) : (x, y) in L1, (-y, z) in L2}, saturated.
/// The sign on the middle factor makes graphs of f and g compose to the graph of g o f.
inline Correspondence compose_correspondences(const Correspondence& L2, const Correspondence& L1) {
  if (L1.g_plus != L2.g_minus) throw std::invalid_argument("compose_correspondences: middle genus mismatch");
  const std::size_t n0 = static_cast<std::size_t>(2 * L1.g_minus), n1 = static_cast<std::size_t>(2 * L1.g_plus),
                    n2 = static_cast<std::size_t>(2 * L2.g_plus);
  IntMat stacked = detail::cols(L1.basis, n0, n0 + n1);
  IntMat c2x = detail::cols(L2.basis, 0, n1);
  stacked.insert(stacked.end(), c2x.begin(), c2x.end());
  IntMat K = left_kernel(stacked, n1);
  IntMat rows;
  const std::size_t r1 = L1.basis.size();
  for (const auto& c : K) {
    IntVec x(n0, 0), z(n2, 0);
    for (std::size_t i = 0; i < r1; ++i) detail::axpy(x, detail::cols({L1.basis[i]}, 0, n0)[0], c[i]);
    for (std::size_t i = 0; i < L2.basis.size(); ++i) detail::axpy(z, detail::cols({L2.basis[i]}, n1, n1 + n2)[0], c[r1 + i]);
    rows.push_back(concat(x, z));
  }
  const std::size_t n = n0 + n2;
  return {L1.g_minus, L2.g_plus, n == 0 ? IntMat{} : row_basis(saturate(rows, n), n)};
}

/// delta = u m + v l with gamma . delta = 1 for gamma = alpha m + beta l (alpha v - beta u = 1).
struct SymplecticCompletion {
  long long u = 0, v = 0;
  IntMat matrix;  // 2x2 with columns gamma, delta
};

inline SymplecticCompletion symplectic_complete(long long alpha, long long beta) {
  if (bezout(alpha, beta).g != 1) throw std::invalid_argument("symplectic_complete: class is not primitive");
  SymplecticCompletion s;
  if (alpha == 0) {
    s.u = -beta;  // beta = +-1
    s.v = 0;
  } else {
    // alpha v - beta u = 1; normalize u into [0, |alpha|)
    Bezout b = bezout(alpha, -beta);  // alpha * s + (-beta) * t = 1
    long long u = b.t, v = b.s;
    long long step = std::llabs(alpha);
    long long shift = detail::floor_div(u, step);
    // (u, v) -> (u + k alpha, v + k beta) preserves alpha v - beta u
    long long k = alpha > 0 ? -shift : shift;
    u += k * alpha;
    v += k * beta;
    s.u = u;
    s.v = v;
  }
  if (alpha * s.v - beta * s.u != 1) throw std::logic_error("symplectic_complete: Bezout failure");
  s.matrix = {{alpha, s.u}, {beta, s.v}};
  return s;
}

/// Genus-g change of basis sending a_h to gamma and b_h to delta, identity elsewhere.
inline IntMat symplectic_complete_in_handle(int g, int h, long long alpha, long long beta) {
  auto s = symplectic_complete(alpha, beta);
  IntMat P = identity(static_cast<std::size_t>(2 * g));
  const std::size_t a = a_index(g, h), b = b_index(g, h);
  P[a][a] = alpha;
  P[b][a] = beta;
  P[a][b] = s.u;
  P[b][b] = s.v;
  return P;
}

/// Ordered basis d_1..d_n of a Lagrangian complement with l_i . d_j = delta_ij and d_i . d_j = 0.
inline IntMat complementary_lagrangian(const IntMat& Lrows, const IntMat& form) {
  const std::size_t n2 = form.size(), n = Lrows.size();
  if (n == 0) return {};
  IntMat A;  // rows l_i^T Omega
  for (const auto& l : Lrows) {
    IntVec r(n2, 0);
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t k = 0; k < n2; ++k) r[j] += l[k] * form[k][j];
    A.push_back(r);
  }
  auto h = hermite(transpose(A));
  if (h.rank != n) throw LagrangianError("complement: basis is not of full rank");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (h.H[i][j] != (i == j ? 1 : 0)) throw LagrangianError("complement: sublattice is not a direct summand");
  IntMat D(h.U.begin(), h.U.begin() + static_cast<long>(n));
  IntMat fixed = D;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      long long t = -pairing(D[i], D[j], form);
      detail::axpy(fixed[i], Lrows[j], t);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (pairing(Lrows[i], fixed[j], form) != (i == j ? 1 : 0)) throw std::logic_error("complement: duality check failed");
      if (pairing(fixed[i], fixed[j], form) != 0) throw std::logic_error("complement: isotropy check failed");
    }
  return fixed;
}

/// L intersected with the coordinate subspace spanned by the listed coordinates.
inline IntMat intersect_coordinates(const IntMat& Lbasis, std::size_t n, const std::vector<std::size_t>& coords) {
  IntMat N = right_kernel(Lbasis, n);
  IntMat Nr;
  for (const auto& row : N) {
    IntVec r;
    for (auto c : coords) r.push_back(row[c]);
    Nr.push_back(r);
  }
  IntMat K = right_kernel(Nr, coords.size());
  IntMat out;
  for (const auto& k : K) {
    IntVec v(n, 0);
    for (std::size_t i = 0; i < coords.size(); ++i) v[coords[i]] = k[i];
    out.push_back(v);
  }
  return row_basis(out, n);
}

}  // namespace abtqft
