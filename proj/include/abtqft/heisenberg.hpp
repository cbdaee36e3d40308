#pragma once

// Finite Heisenberg groups H_p(Sigma) in split coordinates, Schroedinger
// modules W_q(L), and the tensor-quotient construction
// W_q(L_C) (x)_{H(Sigma_-)} W_q(L_-) used as an independent oracle for
// the functor on simple cobordisms.

#include "abtqft/cyclotomic.hpp"
#include "abtqft/homology.hpp"
#include "abtqft/linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft {

/// Element (k, x) of the integral Heisenberg group Z x Z^{2g}.
struct HeisIntegral {
  long long k = 0;
  IntVec x;
  friend bool operator==(const HeisIntegral& a, const HeisIntegral& b) { return a.k == b.k && a.x == b.x; }
};

/// (k, x)(l, y) = (k + l + x.y, x + y) for the given form.
inline HeisIntegral heis_mul_integral(const HeisIntegral& h1, const HeisIntegral& h2, const IntMat& form) {
  if (h1.x.size() != h2.x.size()) throw std::invalid_argument("heis_mul_integral: length mismatch");
  HeisIntegral r{h1.k + h2.k + pairing(h1.x, h2.x, form), h1.x};
  for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] += h2.x[i];
  return r;
}

inline HeisIntegral heis_mul_integral(const HeisIntegral& h1, const HeisIntegral& h2) {
  return heis_mul_integral(h1, h2, standard_form(static_cast<int>(h1.x.size() / 2)));
}

inline HeisIntegral heis_inverse_integral(const HeisIntegral& h) {
  HeisIntegral r{-h.k, h.x};
  for (auto& v : r.x) v = -v;
  return r;
}

/// Element (k, a, b) of the split model (Z_p x L_p) x| L^dual_p.
struct HeisSplit {
  long long k = 0;
  IntVec a, b;
  friend bool operator==(const HeisSplit& x, const HeisSplit& y) { return x.k == y.k && x.a == y.a && x.b == y.b; }
};

/// Monomial operator e_c -> q^{phase[c]} e_{target[c]} on a Schroedinger module.
struct MonomialOp {
  int p = 0;
  std::vector<std::size_t> target;
  std::vector<long long> phase;

  std::size_t dim() const { return target.size(); }

  /// this o other
  MonomialOp after(const MonomialOp& other) const {
    MonomialOp r{p, std::vector<std::size_t>(dim()), std::vector<long long>(dim())};
    for (std::size_t c = 0; c < dim(); ++c) {
      std::size_t t = other.target[c];
      r.target[c] = target[t];
      r.phase[c] = mod(other.phase[c] + phase[t], p);
    }
    return r;
  }

  friend bool operator==(const MonomialOp& x, const MonomialOp& y) {
    return x.p == y.p && x.target == y.target && x.phase == y.phase;
  }

  CycMatrix dense() const {
    const int M = field_order(p);
    CycMatrix m(dim(), dim(), M);
    for (std::size_t c = 0; c < dim(); ++c) m(target[c], c) = q_power(p, phase[c]);
    return m;
  }

  std::vector<CycNum> apply(const std::vector<CycNum>& v) const {
    const int M = field_order(p);
    std::vector<CycNum> r(dim(), CycNum::zero(M));
    for (std::size_t c = 0; c < dim(); ++c)
      if (!v[c].is_zero()) r[target[c]] += v[c].mul_root((M / p) * phase[c]);
    return r;
  }
};

/// Vector of W_q(L): coefficients indexed by labels in Z_{p'}^g (first coordinate most significant).
struct SchrodingerVec {
  int pp = 0;
  int genus = 0;
  std::vector<CycNum> coeffs;
};

/// Mixed-radix index of a label vector, first coordinate most significant.
inline std::size_t label_index(const IntVec& label, int pp) {
  std::size_t idx = 0;
  for (auto c : label) idx = idx * static_cast<std::size_t>(pp) + static_cast<std::size_t>(mod(c, pp));
  return idx;
}

inline IntVec index_label(std::size_t idx, int pp, int n) {
  IntVec lab(static_cast<std::size_t>(n), 0);
  for (int i = n - 1; i >= 0; --i) {
    lab[static_cast<std::size_t>(i)] = static_cast<long long>(idx % static_cast<std::size_t>(pp));
    idx /= static_cast<std::size_t>(pp);
  }
  return lab;
}

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Heisenberg data of a lattice with form Omega and an ordered Lagrangian pair (L, L^dual).
class HeisContext {
 public:
  /// Builds a context; if Ldual is empty the canonical complement of L is used.
  static HeisContext make(int p, const IntMat& form, const IntMat& L, IntMat Ldual = {}) {
    require_supported(p);
    HeisContext c;
    c.p_ = p;
    c.pp_ = pprime_of(p);
    c.M_ = field_order(p);
    c.form_ = form;
    c.n_ = static_cast<int>(form.size() / 2);
    if (form.size() % 2 != 0) throw std::invalid_argument("HeisContext: odd lattice rank");
    if (static_cast<int>(L.size()) != c.n_) throw LagrangianError("HeisContext: L must have half rank");
    if (!is_lagrangian_for(L, form)) throw LagrangianError("HeisContext: L is not Lagrangian");
    c.L_ = L;
    c.Ldual_ = Ldual.empty() && c.n_ > 0 ? complementary_lagrangian(L, form) : Ldual;
    if (static_cast<int>(c.Ldual_.size()) != c.n_) throw LagrangianError("HeisContext: complement must have half rank");
    for (int i = 0; i < c.n_; ++i)
      for (int j = 0; j < c.n_; ++j) {
        if (pairing(c.L_[i], c.Ldual_[j], form) != (i == j ? 1 : 0))
          throw LagrangianError("HeisContext: L . Ldual is not the identity pairing");
        if (pairing(c.Ldual_[i], c.Ldual_[j], form) != 0) throw LagrangianError("HeisContext: Ldual is not isotropic");
      }
    return c;
  }

  /// Standard context: L = <a_i>, Ldual = <b_i>, standard form.
  static HeisContext standard(int p, int g) {
    IntMat L, D;
    for (int i = 0; i < g; ++i) {
      L.push_back(handle_vector(g, i, 1, 0));
      D.push_back(handle_vector(g, i, 0, 1));
    }
    return make(p, standard_form(g), L, D);
  }

  int p() const { return p_; }
  int pp() const { return pp_; }
  int order() const { return M_; }
  int genus() const { return n_; }
  const IntMat& form() const { return form_; }
  const IntMat& L() const { return L_; }
  const IntMat& Ldual() const { return Ldual_; }
  std::size_t dim() const { return ipow(static_cast<std::size_t>(pp_), n_); }

  /// 2g x 2g matrix whose columns are the L basis followed by the Ldual basis.
  IntMat adapted_matrix() const {
    IntMat cols = L_;
    cols.insert(cols.end(), Ldual_.begin(), Ldual_.end());
    return transpose(cols, form_.size());
  }

  /// Integral vector sum a_i l_i + b_i d_i.
  IntVec combine(const IntVec& a, const IntVec& b) const {
    IntVec x(form_.size(), 0);
    for (int i = 0; i < n_; ++i) {
      detail::axpy(x, L_[i], a[i]);
      detail::axpy(x, Ldual_[i], b[i]);
    }
    return x;
  }

  /// (k, a + b) -> (k + a.b mod p, a mod p', b mod p') with a_i = x . d_i, b_i = l_i . x.
  HeisSplit to_finite(const HeisIntegral& h) const {
    if (h.x.size() != form_.size()) throw std::invalid_argument("to_finite: length mismatch");
    HeisSplit s{0, IntVec(static_cast<std::size_t>(n_)), IntVec(static_cast<std::size_t>(n_))};
    long long k = mod(h.k, p_);
    for (int i = 0; i < n_; ++i) {
      long long a = pairing(h.x, Ldual_[i], form_);
      long long b = pairing(L_[i], h.x, form_);
      k = mod(k + mod(a, p_) * mod(b, p_), p_);
      s.a[i] = mod(a, pp_);
      s.b[i] = mod(b, pp_);
    }
    s.k = k;
    return s;
  }

  /// Integral lift (k - a.b, sum a_i l_i + b_i d_i) of a split element.
  HeisIntegral lift(const HeisSplit& s) const {
    long long ab = 0;
    for (int i = 0; i < n_; ++i) ab += s.a[i] * s.b[i];
    return {s.k - ab, combine(s.a, s.b)};
  }

  HeisSplit normalize(HeisSplit s) const {
    s.k = mod(s.k, p_);
    for (auto& v : s.a) v = mod(v, pp_);
    for (auto& v : s.b) v = mod(v, pp_);
    return s;
  }

  /// (k,a,b)(k',a',b') = (k + k' + 2 a.b', a + a', b + b').
  HeisSplit mul(const HeisSplit& x, const HeisSplit& y) const {
    HeisSplit r{x.k + y.k, x.a, x.b};
    for (int i = 0; i < n_; ++i) {
      r.k += 2 * x.a[i] * y.b[i];
      r.a[i] += y.a[i];
      r.b[i] += y.b[i];
    }
    return normalize(r);
  }

  HeisSplit inverse(const HeisSplit& x) const {
    HeisSplit r{-x.k, x.a, x.b};
    for (int i = 0; i < n_; ++i) {
      r.k += 2 * x.a[i] * x.b[i];
      r.a[i] = -x.a[i];
      r.b[i] = -x.b[i];
    }
    return normalize(r);
  }

  HeisSplit unit() const { return {0, IntVec(static_cast<std::size_t>(n_), 0), IntVec(static_cast<std::size_t>(n_), 0)}; }

  /// All p * p'^{2g} elements of the split group.
  std::vector<HeisSplit> elements() const {
    std::vector<HeisSplit> out;
    const std::size_t na = dim();
    for (long long k = 0; k < p_; ++k)
      for (std::size_t ia = 0; ia < na; ++ia)
        for (std::size_t ib = 0; ib < na; ++ib) out.push_back({k, index_label(ia, pp_, n_), index_label(ib, pp_, n_)});
    return out;
  }

  /// (k, a, b) . v_c = q^{k + 2 a.c} v_{c+b}.
  MonomialOp action(const HeisSplit& h) const {
    const std::size_t d = dim();
    MonomialOp op{p_, std::vector<std::size_t>(d), std::vector<long long>(d)};
    for (std::size_t idx = 0; idx < d; ++idx) {
      IntVec c = index_label(idx, pp_, n_);
      long long e = h.k;
      IntVec t(c.size());
      for (int i = 0; i < n_; ++i) {
        e += 2 * h.a[i] * c[i];
        t[i] = c[i] + h.b[i];
      }
      op.target[idx] = label_index(t, pp_);
      op.phase[idx] = mod(e, p_);
    }
    return op;
  }

  MonomialOp action(const HeisIntegral& h) const { return action(to_finite(h)); }

  /// Generator matrices: u, then (0, l_i), then (0, d_i) acting on W_q(L).
  std::vector<MonomialOp> generator_actions() const {
    std::vector<MonomialOp> gens;
    HeisSplit u = unit();
    u.k = 1;
    gens.push_back(action(u));
    for (int i = 0; i < n_; ++i) {
      HeisSplit h = unit();
      h.a[i] = 1;
      gens.push_back(action(h));
    }
    for (int i = 0; i < n_; ++i) {
      HeisSplit h = unit();
      h.b[i] = 1;
      gens.push_back(action(h));
    }
    return gens;
  }

  /// Basis vector b_x = (0, 0, x) . 1.
  std::vector<CycNum> basis_vector(const IntVec& label) const {
    std::vector<CycNum> v(dim(), CycNum::zero(M_));
    v[label_index(label, pp_)] = CycNum::one(M_);
    return v;
  }

  friend bool operator==(const HeisContext& x, const HeisContext& y) {
    return x.p_ == y.p_ && x.form_ == y.form_ && x.L_ == y.L_ && x.Ldual_ == y.Ldual_;
  }

 private:
  int p_ = 0, pp_ = 0, M_ = 0, n_ = 0;
  IntMat form_, L_, Ldual_;
};

/// Applies a split element to a vector of W_q(L).
inline SchrodingerVec schrodinger_act(const HeisSplit& h, const SchrodingerVec& v, const HeisContext& ctx) {
  if (v.coeffs.size() != ctx.dim()) throw std::invalid_argument("schrodinger_act: vector does not match context");
  return {ctx.pp(), ctx.genus(), ctx.action(h).apply(v.coeffs)};
}

/// Embedding of H_1(Sigma_-) into H_1(-Sigma_-) + H_1(Sigma_+).
inline IntVec iota_minus(const IntVec& x, int g_plus) { return concat(x, IntVec(static_cast<std::size_t>(2 * g_plus), 0)); }
/// Embedding of H_1(Sigma_+) into H_1(-Sigma_-) + H_1(Sigma_+).
inline IntVec iota_plus(const IntVec& y, int g_minus) { return concat(IntVec(static_cast<std::size_t>(2 * g_minus), 0), y); }

/// Right action of h in H(Sigma_-) on W_q(L_C): the left action of the same element of H(-Sigma_-).
inline MonomialOp right_act_boundary(const HeisIntegral& h, const HeisContext& ctxC, int g_plus) {
  return ctxC.action(HeisIntegral{h.k, iota_minus(h.x, g_plus)});
}

/// Quotient of a free module by relations e_i = q^c e_j.
///
/// Every balancing relation of the tensor product is binomial with
/// coefficients that are powers of q, so the quotient is computed exactly by
/// a union-find that tracks the phase of each basis vector relative to its
/// class representative. A cycle with nonzero total phase kills the class.
class MonomialQuotient {
 public:
  MonomialQuotient(std::size_t n, int p) : p_(p), parent_(n), phase_(n, 0), dead_(n, false) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  struct Class {
    std::size_t root;
    long long phase;  ///< e_i = q^phase e_root
    bool zero;
  };

  Class find(std::size_t i) {
    long long ph = 0;
    std::size_t r = i;
    while (parent_[r] != r) {
      ph += phase_[r];
      r = parent_[r];
    }
    // path compression
    long long acc = ph;
    std::size_t x = i;
    while (parent_[x] != r) {
      std::size_t next = parent_[x];
      long long own = phase_[x];
      parent_[x] = r;
      phase_[x] = mod(acc, p_);
      acc -= own;
      x = next;
    }
    return {r, mod(ph, p_), dead_[r]};
  }

  /// Imposes e_i = q^c e_j.
  void relate(std::size_t i, std::size_t j, long long c) {
    Class a = find(i), b = find(j);
    long long rel = mod(c + b.phase - a.phase, p_);  // e_{root a} = q^rel e_{root b}
    if (a.root == b.root) {
      if (rel != 0) dead_[a.root] = true;
      return;
    }
    parent_[a.root] = b.root;
    phase_[a.root] = rel;
    dead_[b.root] = dead_[b.root] || dead_[a.root];
  }

  /// Number of surviving classes.
  std::size_t dimension() {
    std::size_t d = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i)
      if (parent_[i] == i && !dead_[i]) ++d;
    return d;
  }

 private:
  int p_;
  std::vector<std::size_t> parent_;
  std::vector<long long> phase_;
  std::vector<bool> dead_;
};

/// Result of the tensor-quotient computation.
struct TensorQuotient {
  std::size_t plain_dim = 0;     ///< dim W(L_C) * dim W(L_-)
  std::size_t quotient_dim = 0;  ///< dimension after imposing the balancing relations
  CycMatrix map;                 ///< w -> psi([1 (x) w]) in the basis b^+_z of W(L_+)
};

/// W_q(L_C) (x)_{H(Sigma_-)} W_q(L_-) identified with W_q(L_+) by
/// [ (0, (0, sum z_i d^+_i)) . 1_C (x) 1 ] -> b^+_z.
/// Also checks that the identification intertwines the H(Sigma_+) actions.
inline TensorQuotient bimodule_tensor(const HeisContext& ctxC, const HeisContext& ctxMinus, const HeisContext& ctxPlus) {
  const int g_minus = ctxMinus.genus(), g_plus = ctxPlus.genus();
  if (ctxC.genus() != g_minus + g_plus) throw std::invalid_argument("bimodule_tensor: inconsistent contexts");
  if (ctxC.p() != ctxMinus.p() || ctxC.p() != ctxPlus.p()) throw std::invalid_argument("bimodule_tensor: order mismatch");
  if (ctxC.form() != difference_form(g_minus, g_plus)) throw std::invalid_argument("bimodule_tensor: boundary form mismatch");
  const int p = ctxC.p(), M = ctxC.order();
  const std::size_t dC = ctxC.dim(), dm = ctxMinus.dim(), dp = ctxPlus.dim();
  const std::size_t N = dC * dm;

  MonomialQuotient quot(N, p);
  // generators of H(Sigma_-): u and (0, e_j)
  std::vector<HeisIntegral> gens;
  gens.push_back({1, IntVec(static_cast<std::size_t>(2 * g_minus), 0)});
  for (int j = 0; j < 2 * g_minus; ++j) gens.push_back({0, unit(static_cast<std::size_t>(2 * g_minus), static_cast<std::size_t>(j))});
  for (const auto& h : gens) {
    MonomialOp right = right_act_boundary(h, ctxC, g_plus);
    MonomialOp left = ctxMinus.action(h);
    for (std::size_t B = 0; B < dC; ++B)
      for (std::size_t w = 0; w < dm; ++w)
        // (B . h) (x) w = B (x) (h . w)
        quot.relate(right.target[B] * dm + w, B * dm + left.target[w], left.phase[w] - right.phase[B]);
  }

  TensorQuotient out;
  out.plain_dim = N;
  out.quotient_dim = quot.dimension();
  if (out.quotient_dim != dp)
    throw std::runtime_error("bimodule_tensor: quotient dimension " + std::to_string(out.quotient_dim) + " differs from p'^{g+} = " +
                             std::to_string(dp));

  // classes e_z = [rho_C(iota_+(0, z . d+)) 1_C (x) 1]; root -> (z, phase of e_z against the root)
  std::vector<MonomialOp> ez_ops;
  std::map<std::size_t, std::pair<std::size_t, long long>> root_to_z;
  for (std::size_t z = 0; z < dp; ++z) {
    IntVec lab = index_label(z, ctxPlus.pp(), g_plus);
    IntVec y = ctxPlus.combine(IntVec(static_cast<std::size_t>(g_plus), 0), lab);
    MonomialOp op = ctxC.action(HeisIntegral{0, iota_plus(y, g_minus)});
    ez_ops.push_back(op);
    auto c = quot.find(op.target[0] * dm);
    if (c.zero || !root_to_z.emplace(c.root, std::make_pair(z, mod(op.phase[0] + c.phase, p))).second)
      // happens for even p: an element of L_C congruent to L_- mod p' can act by -1 on 1_C
      throw UnsupportedOrder("bimodule_tensor: the classes [B_z (x) 1] are not a basis for p = " + std::to_string(p) +
                             "; the canonical generators are incompatible at this order");
  }

  // class of q^e e_i expressed in the basis b^+_z
  auto express = [&](std::size_t i, long long e) -> std::pair<std::size_t, std::optional<long long>> {
    auto c = quot.find(i);
    if (c.zero) return {0, std::nullopt};
    auto it = root_to_z.find(c.root);
    if (it == root_to_z.end()) throw std::logic_error("bimodule_tensor: class outside the identified basis");
    return {it->second.first, mod(e + c.phase - it->second.second, p)};
  };

  out.map = CycMatrix(dp, dm, M);
  for (std::size_t w = 0; w < dm; ++w) {
    auto [z, e] = express(w, 0);
    if (e) out.map(z, w) = q_power(p, *e);
  }

  // equivariance of the identification under generators of H(Sigma_+)
  std::vector<HeisIntegral> plus_gens;
  plus_gens.push_back({1, IntVec(static_cast<std::size_t>(2 * g_plus), 0)});
  for (int j = 0; j < 2 * g_plus; ++j) plus_gens.push_back({0, unit(static_cast<std::size_t>(2 * g_plus), static_cast<std::size_t>(j))});
  for (const auto& h : plus_gens) {
    MonomialOp onC = ctxC.action(HeisIntegral{h.k, iota_plus(h.x, g_minus)});
    MonomialOp onPlus = ctxPlus.action(h);
    for (std::size_t z = 0; z < dp; ++z) {
      MonomialOp moved = onC.after(ez_ops[z]);
      auto [zz, e] = express(moved.target[0] * dm, moved.phase[0]);
      if (!e || zz != onPlus.target[z] || *e != onPlus.phase[z])
        throw std::runtime_error("bimodule_tensor: identification is not H(Sigma_+)-equivariant");
    }
  }
  return out;
}

}  // namespace abtqft
