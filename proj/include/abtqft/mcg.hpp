#pragma once

// Mapping classes as automorphisms of the free group <alpha_i, beta_i>
// fixing the boundary word, the surface braid group quotient phi, Morita's
// d_i and theta_f, the Poincare duals t_f, Weil intertwiners for the
// symplectic and Heisenberg actions, and the 2-cocycle c(f, g).

#include "abtqft/cyclotomic.hpp"
#include "abtqft/heisenberg.hpp"
#include "abtqft/homology.hpp"
#include "abtqft/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft {

class InvalidMappingClass : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotProjective : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Word in alpha_1..alpha_g (letters 1..g) and beta_1..beta_g (letters g+1..2g); negative letters are inverses.
struct FreeWord {
  std::vector<int> letters;

  static FreeWord alpha(int i, int e = 1) { return {{e * (i + 1)}}; }
  static FreeWord beta(int g, int i, int e = 1) { return {{e * (g + i + 1)}}; }

  FreeWord reduced() const {
    std::vector<int> out;
    for (int x : letters) {
      if (x == 0) throw InvalidMappingClass("FreeWord: letter 0 is not allowed");
      if (!out.empty() && out.back() == -x)
        out.pop_back();
      else
        out.push_back(x);
    }
    return {out};
  }

  FreeWord inverse() const {
    FreeWord r;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back(-*it);
    return r;
  }

  friend FreeWord operator*(const FreeWord& a, const FreeWord& b) {
    FreeWord r = a;
    r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
    return r.reduced();
  }
  friend bool operator==(const FreeWord& a, const FreeWord& b) { return a.letters == b.letters; }

  /// Homology class in Z^{2g} (a-coordinates then b-coordinates).
  IntVec abelianize(int g) const {
    IntVec v(static_cast<std::size_t>(2 * g), 0);
    for (int x : letters) {
      int l = std::abs(x);
      if (l > 2 * g) throw InvalidMappingClass("FreeWord: letter out of range for genus " + std::to_string(g));
      v[static_cast<std::size_t>(l - 1)] += x > 0 ? 1 : -1;
    }
    return v;
  }
};

/// Product of commutators [alpha_i, beta_i] = alpha_i beta_i alpha_i^-1 beta_i^-1.
inline FreeWord boundary_word(int g) {
  FreeWord w;
  for (int i = 0; i < g; ++i) {
    int a = i + 1, b = g + i + 1;
    w.letters.insert(w.letters.end(), {a, b, -a, -b});
  }
  return w;
}

/// Replaces every letter of w by its image.
inline FreeWord substitute(const FreeWord& w, const std::vector<FreeWord>& images) {
  FreeWord r;
  for (int x : w.letters) {
    const FreeWord& img = images.at(static_cast<std::size_t>(std::abs(x) - 1));
    r = r * (x > 0 ? img : img.inverse());
  }
  return r.reduced();
}

/// Automorphism of the free group given by generator images; optionally with the inverse's images.
class MappingClass {
 public:
  static MappingClass make(int g, std::vector<FreeWord> images, std::optional<std::vector<FreeWord>> inverse_images = std::nullopt) {
    MappingClass f;
    f.g_ = g;
    if (images.size() != static_cast<std::size_t>(2 * g)) throw InvalidMappingClass("MappingClass: need 2g generator images");
    for (auto& w : images) {
      w.abelianize(g);
      w = w.reduced();
    }
    f.images_ = std::move(images);
    FreeWord dw = boundary_word(g);
    if (!(substitute(dw, f.images_) == dw)) throw InvalidMappingClass("MappingClass: the boundary word is not fixed");
    f.matrix_ = identity(static_cast<std::size_t>(2 * g));
    for (int j = 0; j < 2 * g; ++j) {
      IntVec c = f.images_[static_cast<std::size_t>(j)].abelianize(g);
      for (int i = 0; i < 2 * g; ++i) f.matrix_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(i)];
    }
    if (!is_symplectic(f.matrix_, standard_form(g))) throw InvalidMappingClass("MappingClass: induced matrix is not symplectic");
    if (inverse_images) {
      MappingClass inv = make(g, *inverse_images);
      for (int j = 0; j < 2 * g; ++j) {
        FreeWord gen{{j + 1}};
        if (!(substitute(substitute(gen, inv.images_), f.images_) == gen) || !(substitute(substitute(gen, f.images_), inv.images_) == gen))
          throw InvalidMappingClass("MappingClass: inverse images do not invert the substitution");
      }
      f.inverse_ = inv.images_;
    }
    return f;
  }

  static MappingClass identity_class(int g) {
    std::vector<FreeWord> imgs;
    for (int j = 0; j < 2 * g; ++j) imgs.push_back({{j + 1}});
    return make(g, imgs, imgs);
  }

  int genus() const { return g_; }
  const std::vector<FreeWord>& images() const { return images_; }
  const IntMat& matrix() const { return matrix_; }  ///< f_*, columns are images of a_i, b_i
  bool has_inverse() const { return inverse_.has_value(); }

  FreeWord apply(const FreeWord& w) const { return substitute(w, images_); }

  MappingClass inverse() const {
    if (!inverse_) throw InvalidMappingClass("MappingClass: inverse images are not known");
    return make(g_, *inverse_, images_);
  }

  /// (this o other)(x) = this(other(x)).
  MappingClass after(const MappingClass& other) const {
    if (other.g_ != g_) throw InvalidMappingClass("MappingClass: genus mismatch");
    std::vector<FreeWord> imgs;
    for (const auto& w : other.images_) imgs.push_back(substitute(w, images_));
    std::optional<std::vector<FreeWord>> inv;
    if (inverse_ && other.inverse_) {
      inv.emplace();
      for (const auto& w : *inverse_) inv->push_back(substitute(w, *other.inverse_));
    }
    return make(g_, imgs, inv);
  }

  friend bool operator==(const MappingClass& x, const MappingClass& y) { return x.g_ == y.g_ && x.images_ == y.images_; }

 private:
  int g_ = 0;
  std::vector<FreeWord> images_;
  std::optional<std::vector<FreeWord>> inverse_;
  IntMat matrix_;
};

/// Built-in Dehn twists.
namespace twists {

/// Twist along alpha_i: beta_i -> beta_i alpha_i.
inline MappingClass t_alpha(int g, int i) {
  std::vector<FreeWord> f, inv;
  for (int j = 0; j < 2 * g; ++j) {
    f.push_back({{j + 1}});
    inv.push_back({{j + 1}});
  }
  const int a = i + 1, b = g + i + 1;
  f[static_cast<std::size_t>(b - 1)] = {{b, a}};
  inv[static_cast<std::size_t>(b - 1)] = {{b, -a}};
  return MappingClass::make(g, f, inv);
}

/// Twist along beta_i: alpha_i -> alpha_i beta_i^-1.
inline MappingClass t_beta(int g, int i) {
  std::vector<FreeWord> f, inv;
  for (int j = 0; j < 2 * g; ++j) {
    f.push_back({{j + 1}});
    inv.push_back({{j + 1}});
  }
  const int a = i + 1, b = g + i + 1;
  f[static_cast<std::size_t>(a - 1)] = {{a, -b}};
  inv[static_cast<std::size_t>(a - 1)] = {{a, b}};
  return MappingClass::make(g, f, inv);
}

/// Genus-2 twist along the curve joining the handles, homology class b_1 - a_2.
inline MappingClass t_connect() {
  const int a1 = 1, a2 = 2, b1 = 3, b2 = 4;
  std::vector<FreeWord> f{{{a1, -a2, b1}}, {{-b1, a2, b1}}, {{-b1, a2, b1, -a2, b1}}, {{b2, -a2, b1}}};
  std::vector<FreeWord> inv{{{a1, -b1, a2}}, {{-a2, b1, a2, -b1, a2}}, {{-a2, b1, a2}}, {{b2, -b1, a2}}};
  return MappingClass::make(2, f, inv);
}

/// Generating twists: t_alpha, t_beta per handle, plus t_connect in genus 2.
inline std::vector<MappingClass> generators(int g) {
  std::vector<MappingClass> out;
  for (int i = 0; i < g; ++i) {
    out.push_back(t_alpha(g, i));
    out.push_back(t_beta(g, i));
  }
  if (g == 2) out.push_back(t_connect());
  return out;
}

}  // namespace twists

// ---------------------------------------------------------------------------
// Surface braid group quotient
// ---------------------------------------------------------------------------

struct BraidLetter {
  enum class Kind { sigma, alpha, beta } kind = Kind::sigma;
  int index = 0;  ///< 0-based
  int sign = 1;
};

using BraidWord = std::vector<BraidLetter>;

/// sigma_i -> (1, 0), alpha_r -> (0, a_r), beta_s -> (0, b_s), multiplied with the integral law.
inline HeisIntegral braid_phi(const BraidWord& w, int g) {
  const IntMat J = standard_form(g);
  HeisIntegral acc{0, IntVec(static_cast<std::size_t>(2 * g), 0)};
  for (const auto& l : w) {
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("braid_phi: letter sign must be +-1");
    HeisIntegral h{0, IntVec(static_cast<std::size_t>(2 * g), 0)};
    switch (l.kind) {
      case BraidLetter::Kind::sigma:
        if (l.index < 0) throw std::invalid_argument("braid_phi: bad sigma index");
        h.k = 1;
        break;
      case BraidLetter::Kind::alpha:
        if (l.index < 0 || l.index >= g) throw std::invalid_argument("braid_phi: bad alpha index");
        h.x[a_index(g, l.index)] = 1;
        break;
      case BraidLetter::Kind::beta:
        if (l.index < 0 || l.index >= g) throw std::invalid_argument("braid_phi: bad beta index");
        h.x[b_index(g, l.index)] = 1;
        break;
    }
    if (l.sign < 0) h = heis_inverse_integral(h);
    acc = heis_mul_integral(acc, h, J);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Morita layer
// ---------------------------------------------------------------------------

/// d_i(w): project to alpha_i, beta_i, split into blocks (nu_j, mu_j) and
/// return sum_{j,k} iota_jk nu_j mu_k with iota_jk = 1 for j <= k, -1 otherwise.
inline long long morita_d(const FreeWord& w, int g, int i) {
  const int a = i + 1, b = g + i + 1;
  std::vector<long long> nu, mu;
  bool open = false;
  for (int x : w.letters) {
    const int l = std::abs(x), s = x > 0 ? 1 : -1;
    if (l == a) {
      if (open) mu.push_back(0);
      nu.push_back(s);
      open = true;
    } else if (l == b) {
      if (!open) nu.push_back(0);
      mu.push_back(s);
      open = false;
    }
  }
  if (open) mu.push_back(0);
  long long d = 0, mu_prefix = 0, mu_total = 0;
  for (auto m : mu) mu_total += m;
  // sum_j nu_j (sum_{k >= j} mu_k - sum_{k < j} mu_k)
  for (std::size_t j = 0; j < nu.size(); ++j) {
    long long before = mu_prefix;
    long long after = mu_total - before;
    d += nu[j] * (after - before);
    mu_prefix += mu[j];
  }
  return d;
}

/// theta_f on a_1..a_g, b_1..b_g: sum_i d_i(f(generator)).
inline IntVec theta(const MappingClass& f) {
  const int g = f.genus();
  IntVec th(static_cast<std::size_t>(2 * g), 0);
  for (int j = 0; j < 2 * g; ++j)
    for (int i = 0; i < g; ++i) {
      FreeWord gen{{j + 1}};
      th[static_cast<std::size_t>(j)] += morita_d(f.images()[static_cast<std::size_t>(j)], g, i) - morita_d(gen, g, i);
    }
  return th;
}

/// theta as a linear form, evaluated on x.
inline long long theta_value(const IntVec& th, const IntVec& x) {
  long long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += th[i] * x[i];
  return s;
}

/// t with theta(x) = 2 t.x (mod p): t_{a_i} = theta(b_i)/2, t_{b_i} = -theta(a_i)/2.
inline IntVec t_dual(const IntVec& th, int p) {
  if (p % 2 == 0) throw UnsupportedOrder("t_dual requires odd p");
  const int g = static_cast<int>(th.size() / 2);
  const long long half = (p + 1) / 2;
  IntVec t(th.size(), 0);
  for (int i = 0; i < g; ++i) {
    t[a_index(g, i)] = mod(half * th[b_index(g, i)], p);
    t[b_index(g, i)] = mod(-half * th[a_index(g, i)], p);
  }
  return t;
}

inline IntVec mod_vec(IntVec v, int p) {
  for (auto& x : v) x = mod(x, p);
  return v;
}

/// c(f, g) = g_*^{-1}(t_f) . t_g mod p.
inline long long cocycle_c(const MappingClass& f, const MappingClass& g, int p) {
  IntVec tf = t_dual(theta(f), p), tg = t_dual(theta(g), p);
  return mod(intersection(matvec(symplectic_inverse(g.matrix()), tf), tg), p);
}

/// t_f . g_*(t_g).
inline long long cocycle_c_pushforward(const MappingClass& f, const MappingClass& g, int p) {
  IntVec tf = t_dual(theta(f), p), tg = t_dual(theta(g), p);
  return mod(intersection(tf, matvec(g.matrix(), tg)), p);
}

/// -t_f . t_{g^-1}.
inline long long cocycle_c_inverse(const MappingClass& f, const MappingClass& g, int p) {
  IntVec tf = t_dual(theta(f), p), tgi = t_dual(theta(g.inverse()), p);
  return mod(-intersection(tf, tgi), p);
}

// ---------------------------------------------------------------------------
// Weil intertwiners
// ---------------------------------------------------------------------------

/// Divides by the first nonzero entry in row-major order.
inline CycMatrix normalize_first_entry(const CycMatrix& S) {
  for (std::size_t i = 0; i < S.rows(); ++i)
    for (std::size_t j = 0; j < S.cols(); ++j)
      if (!S(i, j).is_zero()) return S(i, j).inverse() * S;
  throw ArithmeticError("normalize_first_entry: zero matrix");
}

/// Monomial action of the integral element (k, x) on W_q(L).
inline MonomialOp rho(const HeisContext& ctx, long long k, const IntVec& x) { return ctx.action(HeisIntegral{k, x}); }

/// S with rho(k, f x) S = S rho(k, x), normalized so its first nonzero entry is 1.
inline CycMatrix weil_intertwiner(const IntMat& f, const HeisContext& ctx) {
  if (!is_symplectic(f, ctx.form())) throw InvalidMappingClass("weil_intertwiner: matrix is not symplectic");
  const int p = ctx.p(), M = ctx.order();
  const std::size_t d = ctx.dim();
  auto elements = ctx.elements();
  std::vector<MonomialOp> A, B;  // rho(tau h), rho(h^-1)
  for (const auto& h : elements) {
    HeisIntegral hi = ctx.lift(h);
    A.push_back(rho(ctx, hi.k, matvec(f, hi.x)));
    B.push_back(ctx.action(ctx.inverse(h)));
  }
  // seed X = all ones, then unit matrices E_ab until the average is nonzero
  for (std::size_t seed = 0; seed <= d * d; ++seed) {
    std::vector<std::vector<long long>> hist(d * d, std::vector<long long>(static_cast<std::size_t>(p), 0));
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const MonomialOp &a = A[e], &b = B[e];
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          // (A X B)_{tA(k), l} += X_{k, tB(l)} q^{phA(k) + phB(l)}
          const std::size_t col = b.target[l];
          const bool one = seed == 0 || (seed - 1 == k * d + col);
          if (!one) continue;
          hist[a.target[k] * d + l][static_cast<std::size_t>(mod(a.phase[k] + b.phase[l], p))] += 1;
        }
    }
    CycMatrix S(d, d, M);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) S(i, j) = CycNum::from_histogram(M, hist[i * d + j], M / p);
    if (!S.is_zero()) return normalize_first_entry(S);
  }
  throw std::logic_error("weil_intertwiner: averaging vanished for every seed");
}

/// Checks rho(k, f x) S = S rho(k, x) for the listed integral elements.
inline bool intertwines(const CycMatrix& S, const IntMat& f, const HeisContext& ctx, const std::vector<HeisIntegral>& hs,
                        const std::function<long long(const IntVec&)>& shift = nullptr) {
  for (const auto& h : hs) {
    long long k = h.k + (shift ? shift(h.x) : 0);
    CycMatrix lhs = rho(ctx, k, matvec(f, h.x)).dense() * S;
    CycMatrix rhs = S * ctx.action(h).dense();
    if (lhs != rhs) return false;
  }
  return true;
}

/// S_H(f) = rho(0, f_* t_f) S(f).
inline CycMatrix weil_H(const MappingClass& f, const HeisContext& ctx) {
  const int p = ctx.p();
  if (p % 2 == 0) throw UnsupportedOrder("weil_H requires odd p");
  IntVec t = t_dual(theta(f), p);
  CycMatrix S = weil_intertwiner(f.matrix(), ctx);
  return rho(ctx, 0, matvec(f.matrix(), t)).dense() * S;
}

/// lambda with A B = lambda C.
inline CycNum projective_defect(const CycMatrix& A, const CycMatrix& B, const CycMatrix& C) {
  CycMatrix AB = A * B;
  for (std::size_t i = 0; i < C.rows(); ++i)
    for (std::size_t j = 0; j < C.cols(); ++j)
      if (!C(i, j).is_zero()) {
        CycNum lambda = AB(i, j) / C(i, j);
        if (AB != lambda * C) throw NotProjective("projective_defect: A B is not proportional to C");
        return lambda;
      }
  throw ArithmeticError("projective_defect: C is zero");
}

/// Defect ratio of the S_H triple against the S triple for (f, g, f o g).
inline CycNum measured_cocycle(const MappingClass& f, const MappingClass& g, const HeisContext& ctx) {
  MappingClass fg = f.after(g);
  CycNum lS = projective_defect(weil_intertwiner(f.matrix(), ctx), weil_intertwiner(g.matrix(), ctx), weil_intertwiner(fg.matrix(), ctx));
  CycNum lH = projective_defect(weil_H(f, ctx), weil_H(g, ctx), weil_H(fg, ctx));
  return lH / lS;
}

}  // namespace abtqft
