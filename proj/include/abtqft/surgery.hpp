#pragma once

// Invariants of closed 3-manifolds from linking matrices: signature,
// colored brackets, the normalized invariant Z(M), colored matrix elements,
// lens spaces through Hopf chains, spin and cohomology refinements, and
// Kirby moves on linking matrices.

#include "abtqft/cyclotomic.hpp"
#include "abtqft/intmat.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft {

class InvalidPresentation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linking matrix with optional fixed colors (component index -> residue mod p').
struct SurgeryPresentation {
  IntMat B;
  std::map<std::size_t, long long> fixed_colors;

  std::size_t size() const { return B.size(); }
  friend bool operator==(const SurgeryPresentation& x, const SurgeryPresentation& y) {
    return x.B == y.B && x.fixed_colors == y.fixed_colors;
  }
};

inline void require_symmetric(const IntMat& B) {
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (B[i].size() != B.size()) throw InvalidPresentation("linking matrix must be square");
    for (std::size_t j = 0; j < i; ++j)
      if (B[i][j] != B[j][i]) throw InvalidPresentation("linking matrix must be symmetric");
  }
}

inline void validate(const SurgeryPresentation& s) {
  require_symmetric(s.B);
  for (const auto& [i, k] : s.fixed_colors)
    if (i >= s.B.size()) throw InvalidPresentation("fixed color index out of range");
}

/// Signature by rational congruence diagonalization.
inline int signature(const IntMat& B) {
  require_symmetric(B);
  const std::size_t n = B.size();
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = Rational(static_cast<long>(B[i][j]));
  int sig = 0;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n && piv == n; ++i)
      if (!done[i] && A[i][i] != 0) piv = i;
    if (piv == n) {
      // all remaining diagonal entries vanish: make one nonzero with a congruence
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && A[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) break;  // remaining block is zero
      // row/col pi += row/col pj
      for (std::size_t c = 0; c < n; ++c) A[pi][c] += A[pj][c];
      for (std::size_t r = 0; r < n; ++r) A[r][pi] += A[r][pj];
      piv = pi;
    }
    const Rational d = A[piv][piv];
    sig += d > 0 ? 1 : -1;
    done[piv] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || A[i][piv] == 0) continue;
      const Rational f = A[i][piv] / d;
      for (std::size_t c = 0; c < n; ++c) A[i][c] -= f * A[piv][c];
      for (std::size_t r = 0; r < n; ++r) A[r][i] -= f * A[r][piv];
    }
  }
  return sig;
}

/// Quadratic form k^T B k.
inline long long quadratic_value(const IntMat& B, const IntVec& k) {
  long long s = 0;
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) s = detail::checked_add(s, detail::checked_mul(B[i][j], detail::checked_mul(k[i], k[j])));
  return s;
}

/// Evaluation <y^{k_1}, ..., y^{k_n}>_L = q^{k^T B k}.
inline CycNum bracket(const IntMat& B, const IntVec& colors, int p) {
  require_symmetric(B);
  if (colors.size() != B.size()) throw InvalidPresentation("bracket: one color per component required");
  return q_power(p, quadratic_value(B, colors));
}

namespace detail {

// Histogram over exponents mod p of q^{k^T B k} for k ranging over
// Z_{p'}^{free} (fixed entries held), optionally restricted by parity.
inline std::vector<long long> color_histogram(const IntMat& B, int p, const std::map<std::size_t, long long>& fixed,
                                              const std::vector<int>* parity = nullptr) {
  const int pp = pprime_of(p);
  const std::size_t n = B.size();
  std::vector<std::size_t> freev;
  IntVec k(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = fixed.find(i);
    if (it == fixed.end())
      freev.push_back(i);
    else
      k[i] = mod(it->second, pp);
  }
  std::vector<long long> hist(static_cast<std::size_t>(p), 0);
  auto admissible = [&]() {
    if (!parity) return true;
    for (std::size_t i = 0; i < n; ++i)
      if (mod(k[i], 2) != (*parity)[i]) return false;
    return true;
  };
  while (true) {
    if (admissible()) ++hist[static_cast<std::size_t>(mod(quadratic_value(B, k), p))];
    std::size_t t = 0;
    for (; t < freev.size(); ++t) {
      if (++k[freev[t]] < pp) break;
      k[freev[t]] = 0;
    }
    if (t == freev.size()) break;
  }
  return hist;
}

inline CycNum histogram_value(const std::vector<long long>& hist, int p) {
  const int M = field_order(p);
  return CycNum::from_histogram(M, hist, M / p);
}

inline IntMat principal_submatrix(const IntMat& B, const std::vector<std::size_t>& idx) {
  IntMat S = zeros(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) S[i][j] = B[idx[i]][idx[j]];
  return S;
}

}  // namespace detail

/// Z(M) = kappa^{-sign B} eta^{n+1} sum_{k in Z_{p'}^n} q^{k^T B k}.
inline CycNum z_invariant(const IntMat& B, int p) {
  require_supported(p);
  require_symmetric(B);
  const auto& ek = eta_kappa(p);
  const long long n = static_cast<long long>(B.size());
  CycNum sum = detail::histogram_value(detail::color_histogram(B, p, {}), p);
  return ek.kappa.pow(-signature(B)) * ek.eta.pow(n + 1) * sum;
}

/// Colored matrix element: fixed components carry their colors, the others the
/// Kirby color eta*omega; kappa^{-sign(Kirby part)} eta^{g_+} eta^{#Kirby} * sum.
inline CycNum matrix_element(const SurgeryPresentation& s, int g_plus, int p) {
  require_supported(p);
  validate(s);
  if (g_plus < 0) throw InvalidPresentation("matrix_element: negative genus");
  const auto& ek = eta_kappa(p);
  std::vector<std::size_t> kirby;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!s.fixed_colors.count(i)) kirby.push_back(i);
  const int sig = signature(detail::principal_submatrix(s.B, kirby));
  CycNum sum = detail::histogram_value(detail::color_histogram(s.B, p, s.fixed_colors), p);
  return ek.kappa.pow(-sig) * ek.eta.pow(g_plus + static_cast<long long>(kirby.size())) * sum;
}

/// Negative continued fraction beta/alpha = m_1 - 1/(m_2 - 1/(... - 1/m_n)).
/// Each step sends (beta, alpha) to (alpha, m alpha - beta) with m the ceiling
/// of beta/alpha for alpha > 0 (floor for alpha < 0); (1, 0) gives the empty chain.
inline std::vector<long long> continued_fraction(long long beta, long long alpha) {
  if (beta == 0) throw InvalidPresentation("continued_fraction: beta must be nonzero");
  if (std::gcd(beta, alpha) != 1) throw InvalidPresentation("continued_fraction: gcd(alpha, beta) must be 1");
  if (beta < 0) {
    beta = -beta;
    alpha = -alpha;
  }
  std::vector<long long> out;
  while (alpha != 0) {
    long long m = alpha > 0 ? -detail::floor_div(-beta, alpha) : detail::floor_div(beta, alpha);
    out.push_back(m);
    long long next = m * alpha - beta;
    beta = alpha;
    alpha = next;
  }
  return out;
}

/// Linear Hopf chain with framings m_i and linking +1 between neighbours.
inline IntMat chain_matrix(const std::vector<long long>& m) {
  IntMat B = zeros(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    B[i][i] = m[i];
    if (i + 1 < m.size()) B[i][i + 1] = B[i + 1][i] = 1;
  }
  return B;
}

/// Z(L(beta, alpha)) via the Hopf chain of the continued fraction.
inline CycNum z_lens(long long beta, long long alpha, int p) { return z_invariant(chain_matrix(continued_fraction(beta, alpha)), p); }

/// The chain with an extra 0-framed component (index 0) of color k linked once with the first chain component.
inline SurgeryPresentation colored_chain(long long beta, long long alpha, long long k) {
  auto m = continued_fraction(beta, alpha);
  IntMat B = zeros(m.size() + 1, m.size() + 1);
  IntMat C = chain_matrix(m);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) B[i + 1][j + 1] = C[i][j];
  if (!m.empty()) B[0][1] = B[1][0] = 1;
  return {B, {{0, k}}};
}

enum class RefinementKind { spin, cohomology };

inline std::string to_string(RefinementKind k) { return k == RefinementKind::spin ? "spin" : "cohomology"; }

struct RefinementClass {
  RefinementKind kind;
  std::vector<int> bits;
  friend bool operator==(const RefinementClass& x, const RefinementClass& y) { return x.kind == y.kind && x.bits == y.bits; }
};

/// True when bits solve B s = diag(B) (spin) or B h = 0 (cohomology) mod 2.
inline bool satisfies_system(const IntMat& B, const RefinementClass& c) {
  if (c.bits.size() != B.size()) return false;
  for (std::size_t i = 0; i < B.size(); ++i) {
    long long s = 0;
    for (std::size_t j = 0; j < B.size(); ++j) s += mod(B[i][j], 2) * c.bits[j];
    long long rhs = c.kind == RefinementKind::spin ? mod(B[i][i], 2) : 0;
    if (mod(s - rhs, 2) != 0) return false;
  }
  return true;
}

/// All solutions of the mod-2 system of the given kind, in lexicographic order.
inline std::vector<RefinementClass> refinement_classes(const IntMat& B, RefinementKind kind) {
  require_symmetric(B);
  const std::size_t n = B.size();
  // augmented rows over GF(2)
  std::vector<std::vector<int>> A(n, std::vector<int>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = static_cast<int>(mod(B[i][j], 2));
    A[i][n] = kind == RefinementKind::spin ? static_cast<int>(mod(B[i][i], 2)) : 0;
  }
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t s = r;
    while (s < n && !A[s][c]) ++s;
    if (s == n) continue;
    std::swap(A[r], A[s]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != r && A[i][c])
        for (std::size_t j = 0; j <= n; ++j) A[i][j] ^= A[r][j];
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (A[i][n]) return {};  // inconsistent; cannot happen for the spin system
  std::vector<std::size_t> freec;
  for (std::size_t c = 0, t = 0; c < n; ++c) {
    if (t < pivcol.size() && pivcol[t] == c)
      ++t;
    else
      freec.push_back(c);
  }
  if (freec.size() > 24) throw InvalidPresentation("refinement_classes: too many classes to enumerate");
  std::vector<RefinementClass> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << freec.size()); ++mask) {
    std::vector<int> x(n, 0);
    for (std::size_t t = 0; t < freec.size(); ++t) x[freec[t]] = static_cast<int>((mask >> t) & 1);
    for (std::size_t i = 0; i < r; ++i) {
      int v = A[i][n];
      for (auto c : freec) v ^= A[i][c] & x[c];
      x[pivcol[i]] = v;
    }
    out.push_back({kind, x});
  }
  std::sort(out.begin(), out.end(), [](const RefinementClass& a, const RefinementClass& b) { return a.bits < b.bits; });
  return out;
}

/// Z(M, s) or Z(M, h): the Gauss sum restricted to colors of the prescribed parities.
inline CycNum refined_invariant(const IntMat& B, const RefinementClass& c, int p) {
  require_supported(p);
  require_symmetric(B);
  if (c.kind == RefinementKind::spin && mod(p, 8) != 4)
    throw UnsupportedOrder("spin refinement requires p = 4 (mod 8), got p = " + std::to_string(p));
  if (c.kind == RefinementKind::cohomology && mod(p, 8) != 0)
    throw UnsupportedOrder("cohomology refinement requires p = 0 (mod 8), got p = " + std::to_string(p));
  if (!satisfies_system(B, c)) throw InvalidPresentation("refined_invariant: class does not solve its mod-2 system");
  const auto& ek = eta_kappa(p);
  CycNum sum = detail::histogram_value(detail::color_histogram(B, p, {}, &c.bits), p);
  return ek.kappa.pow(-signature(B)) * ek.eta.pow(static_cast<long long>(B.size()) + 1) * sum;
}

/// Kirby moves on linking matrices.
struct KirbyMove {
  enum class Kind { blowup, slide } kind = Kind::blowup;
  int sign = 1;           ///< framing of the blow-up unknot, or the slide sign
  std::size_t i = 0, j = 0;  ///< slide component i over component j

  static KirbyMove blowup(int s) { return {Kind::blowup, s, 0, 0}; }
  static KirbyMove slide(std::size_t i, std::size_t j, int s) { return {Kind::slide, s, i, j}; }
};

/// Blow-up appends a +-1 block; a slide of i over j replaces B by E^T B E with E = I + s e_j e_i^T.
inline IntMat kirby_transform(const IntMat& B, const KirbyMove& mv) {
  require_symmetric(B);
  if (mv.sign != 1 && mv.sign != -1) throw InvalidPresentation("kirby_transform: sign must be +1 or -1");
  const std::size_t n = B.size();
  if (mv.kind == KirbyMove::Kind::blowup) {
    IntMat R = zeros(n + 1, n + 1);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) R[a][b] = B[a][b];
    R[n][n] = mv.sign;
    return R;
  }
  if (mv.i >= n || mv.j >= n || mv.i == mv.j) throw InvalidPresentation("kirby_transform: bad slide indices");
  IntMat E = identity(n);
  E[mv.j][mv.i] = mv.sign;
  return matmul(matmul(transpose(E), B), E);
}

}  // namespace abtqft
