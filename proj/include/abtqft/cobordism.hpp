#pragma once

// Cobordisms between surfaces with Lagrangians as programs of simple
// cobordisms (mapping cylinders, index-1 and index-2 surgeries), and the
// Schroedinger functor on them: closed formulas, the tensor-quotient oracle,
// monoidal products and the closure-normalized functor.

#include "abtqft/heisenberg.hpp"
#include "abtqft/homology.hpp"
#include "abtqft/surgery.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abtqft {

/// The composite does not carry the source Lagrangian to the declared target.
class LagrangianMismatch : public std::invalid_argument {
 public:
  LagrangianMismatch(const std::string& what, std::size_t step) : std::invalid_argument(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// A normalized map was requested for a composite without a closure presentation.
class MissingClosure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidCobordism : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Object (Sigma_g, L).
struct CobObject {
  int genus = 0;
  Lagrangian L;

  static CobObject make(int g, const IntMat& rows) { return {g, Lagrangian::make(rows, g)}; }
  static CobObject standard(int g) { return {g, Lagrangian::meridians(g)}; }
  friend bool operator==(const CobObject& x, const CobObject& y) { return x.genus == y.genus && x.L == y.L; }
};

/// Mapping cylinder, index-1 surgery (new handle at position pos) or
/// index-2 surgery along alpha a_h + beta b_h.
struct SimpleCob {
  enum class Kind { cylinder, index1, index2 };
  Kind kind = Kind::cylinder;
  IntMat f;
  int pos = 0;
  int handle = 0;
  long long alpha = 0, beta = 0;

  static SimpleCob cylinder(IntMat f) { return {Kind::cylinder, std::move(f), 0, 0, 0, 0}; }
  static SimpleCob index1(int pos) { return {Kind::index1, {}, pos, 0, 0, 0}; }
  static SimpleCob index2(int h, long long alpha, long long beta) { return {Kind::index2, {}, 0, h, alpha, beta}; }

  friend bool operator==(const SimpleCob& x, const SimpleCob& y) {
    return x.kind == y.kind && x.f == y.f && x.pos == y.pos && x.handle == y.handle && x.alpha == y.alpha && x.beta == y.beta;
  }
};

inline std::string to_string(SimpleCob::Kind k) {
  switch (k) {
    case SimpleCob::Kind::cylinder: return "cylinder";
    case SimpleCob::Kind::index1: return "index1";
    case SimpleCob::Kind::index2: return "index2";
  }
  return "?";
}

struct CobordismProgram {
  CobObject source;
  std::vector<SimpleCob> steps;
  CobObject target;
};

/// Genus after the step; throws InvalidCobordism if the step does not apply at genus g.
inline int step_target_genus(const SimpleCob& s, int g) {
  switch (s.kind) {
    case SimpleCob::Kind::cylinder:
      if (s.f.size() != static_cast<std::size_t>(2 * g)) throw InvalidCobordism("cylinder: matrix size does not match genus");
      for (const auto& r : s.f)
        if (r.size() != s.f.size()) throw InvalidCobordism("cylinder: matrix must be square");
      if (!is_symplectic(s.f, standard_form(g))) throw InvalidCobordism("cylinder: matrix does not preserve the intersection form");
      return g;
    case SimpleCob::Kind::index1:
      if (s.pos < 0 || s.pos > g) throw InvalidCobordism("index1: insertion position out of range");
      return g + 1;
    case SimpleCob::Kind::index2:
      if (s.handle < 0 || s.handle >= g) throw InvalidCobordism("index2: handle out of range");
      if (bezout(s.alpha, s.beta).g != 1) throw InvalidCobordism("index2: surgery class is not primitive");
      return g - 1;
  }
  throw InvalidCobordism("unknown step kind");
}

inline Correspondence correspondence_of(const SimpleCob& s, int g) {
  step_target_genus(s, g);
  switch (s.kind) {
    case SimpleCob::Kind::cylinder: return correspondence_cylinder(s.f);
    case SimpleCob::Kind::index1: return correspondence_index1(g, s.pos);
    case SimpleCob::Kind::index2: return correspondence_index2(g, s.handle, s.alpha, s.beta);
  }
  throw InvalidCobordism("unknown step kind");
}

/// Per-step Lagrangians L_0 = source, ..., L_n = target.
inline std::vector<Lagrangian> validate(const CobordismProgram& prog) {
  if (!is_lagrangian(prog.source.L.basis, prog.source.genus)) throw LagrangianMismatch("source Lagrangian is invalid", 0);
  std::vector<Lagrangian> Ls{prog.source.L};
  int g = prog.source.genus;
  for (std::size_t i = 0; i < prog.steps.size(); ++i) {
    Correspondence C = correspondence_of(prog.steps[i], g);
    Ls.push_back(lagrangian_compose(C, Ls.back()));
    g = C.g_plus;
  }
  if (g != prog.target.genus)
    throw LagrangianMismatch("step " + std::to_string(prog.steps.size()) + " ends at genus " + std::to_string(g) + ", target has genus " +
                                 std::to_string(prog.target.genus),
                             prog.steps.size());
  if (!(Ls.back() == prog.target.L))
    throw LagrangianMismatch("step " + std::to_string(prog.steps.size()) + " produces L = " + to_string(Ls.back().basis) +
                                 ", declared target is " + to_string(prog.target.L.basis),
                             prog.steps.size());
  return Ls;
}

/// Program whose target is the Lagrangian induced by the steps.
inline CobordismProgram make_program(const CobObject& source, std::vector<SimpleCob> steps) {
  if (!is_lagrangian(source.L.basis, source.genus)) throw LagrangianMismatch("source Lagrangian is invalid", 0);
  Lagrangian L = source.L;
  int g = source.genus;
  for (const auto& s : steps) {
    Correspondence C = correspondence_of(s, g);
    L = lagrangian_compose(C, L);
    g = C.g_plus;
  }
  return {source, std::move(steps), CobObject{g, L}};
}

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

inline HeisContext canonical_context(const CobObject& X, int p) { return HeisContext::make(p, standard_form(X.genus), X.L.basis); }

/// L split along handle h: L = (L cap rest) + (L cap handle h).
struct HandleSplit {
  HeisContext full;   ///< basis: rest vectors, then m'; duals: rest duals, then l'
  HeisContext rest;   ///< genus g-1 context with handle h deleted
  IntVec m, l;        ///< m' and l' in Z^{2g}
};

inline std::optional<HandleSplit> split_along_handle(const IntMat& L, int g, int h, int p) {
  const std::size_t n = static_cast<std::size_t>(2 * g);
  std::vector<std::size_t> rest_coords, handle_coords{a_index(g, h), b_index(g, h)};
  for (int i = 0; i < g; ++i)
    if (i != h) {
      rest_coords.push_back(a_index(g, i));
      rest_coords.push_back(b_index(g, i));
    }
  std::sort(rest_coords.begin(), rest_coords.end());
  IntMat Lr = intersect_coordinates(L, n, rest_coords);
  IntMat Lh = intersect_coordinates(L, n, handle_coords);
  if (static_cast<int>(Lr.size()) != g - 1 || Lh.size() != 1) return std::nullopt;
  IntMat Lr_small, Dr_small;
  for (const auto& v : Lr) Lr_small.push_back(remove_handle(v, h));
  if (g > 1) Dr_small = complementary_lagrangian(Lr_small, standard_form(g - 1));
  IntVec m = Lh[0];
  auto sc = symplectic_complete(m[a_index(g, h)], m[b_index(g, h)]);
  IntVec l = handle_vector(g, h, sc.u, sc.v);
  IntMat Lfull, Dfull;
  for (std::size_t i = 0; i < Lr_small.size(); ++i) {
    Lfull.push_back(insert_handle(Lr_small[i], h));
    Dfull.push_back(insert_handle(Dr_small[i], h));
  }
  Lfull.push_back(m);
  Dfull.push_back(l);
  return HandleSplit{HeisContext::make(p, standard_form(g), Lfull, Dfull), HeisContext::make(p, standard_form(g - 1), Lr_small, Dr_small), m,
                     l};
}

/// Context carried to the target of a step.
inline HeisContext propagate_context(const SimpleCob& s, const HeisContext& ctx) {
  const int g = ctx.genus(), p = ctx.p();
  step_target_genus(s, g);
  switch (s.kind) {
    case SimpleCob::Kind::cylinder:
      return HeisContext::make(p, standard_form(g), apply_rows(s.f, ctx.L()), apply_rows(s.f, ctx.Ldual()));
    case SimpleCob::Kind::index1: {
      IntMat L, D;
      for (int i = 0; i < g; ++i) {
        if (i == s.pos) {
          L.push_back(handle_vector(g + 1, s.pos, 1, 0));
          D.push_back(handle_vector(g + 1, s.pos, 0, 1));
        }
        L.push_back(insert_handle(ctx.L()[i], s.pos));
        D.push_back(insert_handle(ctx.Ldual()[i], s.pos));
      }
      if (s.pos == g) {
        L.push_back(handle_vector(g + 1, s.pos, 1, 0));
        D.push_back(handle_vector(g + 1, s.pos, 0, 1));
      }
      return HeisContext::make(p, standard_form(g + 1), L, D);
    }
    case SimpleCob::Kind::index2: {
      if (auto sp = split_along_handle(ctx.L(), g, s.handle, p)) return sp->rest;
      Lagrangian Lp = lagrangian_compose(correspondence_index2(g, s.handle, s.alpha, s.beta), Lagrangian{g, row_basis(ctx.L(), 2 * g)});
      return HeisContext::make(p, standard_form(g - 1), Lp.basis);
    }
  }
  throw InvalidCobordism("unknown step kind");
}

// ---------------------------------------------------------------------------
// Closed formulas
// ---------------------------------------------------------------------------

/// b^-_x -> rho_+(0, phi(sum x_i d^-_i)) . 1 for a homomorphism phi carrying L_- into L_+.
inline CycMatrix graph_map(const std::function<IntVec(const IntVec&)>& phi, const HeisContext& ctx_minus, const HeisContext& ctx_plus) {
  const int p = ctx_minus.p(), M = ctx_minus.order();
  if (ctx_plus.p() != p) throw std::invalid_argument("graph_map: order mismatch");
  const std::size_t nP = static_cast<std::size_t>(2 * ctx_plus.genus());
  for (const auto& l : ctx_minus.L()) {
    HeisSplit s = ctx_plus.to_finite({0, phi(l)});
    for (auto b : s.b)
      if (b != 0) throw LagrangianMismatch("graph_map: phi(L_-) is not contained in L_+", 0);
  }
  CycMatrix F(ctx_plus.dim(), ctx_minus.dim(), M);
  for (std::size_t idx = 0; idx < ctx_minus.dim(); ++idx) {
    IntVec x = index_label(idx, ctx_minus.pp(), ctx_minus.genus());
    IntVec X = ctx_minus.combine(IntVec(x.size(), 0), x);
    IntVec Y = phi(X);
    if (Y.size() != nP) throw std::invalid_argument("graph_map: image has the wrong length");
    HeisSplit s = ctx_plus.to_finite({0, Y});
    F(label_index(s.b, ctx_plus.pp()), idx) = q_power(p, s.k);
  }
  return F;
}

/// Change of context on the same object: the identity cylinder.
inline CycMatrix change_context(const HeisContext& from, const HeisContext& to) {
  if (from.form() != to.form()) throw std::invalid_argument("change_context: forms differ");
  return graph_map([](const IntVec& x) { return x; }, from, to);
}

inline CycMatrix F_cylinder(const IntMat& f, const HeisContext& ctx_minus, const HeisContext& ctx_plus) {
  if (!is_symplectic(f, ctx_minus.form())) throw InvalidCobordism("cylinder: matrix does not preserve the intersection form");
  if (row_basis(apply_rows(f, ctx_minus.L()), f.size()) != row_basis(ctx_plus.L(), f.size()))
    throw LagrangianMismatch("cylinder: f(L_-) differs from L_+", 0);
  return graph_map([&f](const IntVec& x) { return matvec(f, x); }, ctx_minus, ctx_plus);
}

/// Cylinder map into the propagated context (f L, f L^dual): a pure relabeling.
inline CycMatrix F_cylinder(const IntMat& f, const HeisContext& ctx_minus) {
  return F_cylinder(f, ctx_minus, propagate_context(SimpleCob::cylinder(f), ctx_minus));
}

inline CycMatrix F_index1(int pos, const HeisContext& ctx_minus, const HeisContext& ctx_plus) {
  const int g = ctx_minus.genus();
  if (pos < 0 || pos > g) throw InvalidCobordism("index1: insertion position out of range");
  return graph_map([pos](const IntVec& x) { return insert_handle(x, pos); }, ctx_minus, ctx_plus);
}

inline CycMatrix F_index1(int pos, const HeisContext& ctx_minus) {
  return F_index1(pos, ctx_minus, propagate_context(SimpleCob::index1(pos), ctx_minus));
}

/// Surgery class in the adapted handle basis (m', l'): gamma = alpha' m' + beta' l'.
struct AdaptedClass {
  long long alpha = 0, beta = 0;
};

inline AdaptedClass adapted_class(const HandleSplit& sp, int g, int h, long long alpha, long long beta) {
  IntVec gamma = handle_vector(g, h, alpha, beta);
  return {intersection(gamma, sp.l), intersection(sp.m, gamma)};
}

/// Genus-1 factor of the index-2 map: b_k -> q^{-k k'} if d | k (beta k' = alpha k mod p'), else 0.
inline CycNum index2_coefficient(long long alpha, long long beta, long long k, int p) {
  const int pp = pprime_of(p);
  const long long d = std::gcd(mod(beta, pp), static_cast<long long>(pp));
  if (mod(k, d) != 0) return CycNum::zero(field_order(p));
  // solve (beta/d) k' = alpha (k/d) mod p'/d
  const long long n = pp / d;
  long long kp = 0;
  if (n > 1) {
    Bezout b = bezout(mod(beta / d, n), n);
    kp = mod(b.s * mod(alpha * (k / d), n), n);
  }
  return q_power(p, -k * kp);
}

enum class Mode { closed, oracle };

inline std::string to_string(Mode m) { return m == Mode::closed ? "closed" : "oracle"; }

/// Tensor-quotient map for any simple cobordism.
inline CycMatrix F_oracle(const SimpleCob& s, const HeisContext& ctx_minus, const HeisContext& ctx_plus,
                          std::size_t* quotient_dim = nullptr) {
  const int g = ctx_minus.genus();
  Correspondence C = correspondence_of(s, g);
  HeisContext ctxC = HeisContext::make(ctx_minus.p(), C.form(), C.basis);
  TensorQuotient t = bimodule_tensor(ctxC, ctx_minus, ctx_plus);
  if (quotient_dim) *quotient_dim = t.quotient_dim;
  return t.map;
}

/// Index-2 map. Closed mode needs odd p and L_- split along the surgery handle;
/// otherwise the oracle is used and *used_oracle is set.
inline CycMatrix F_index2(int h, long long alpha, long long beta, const HeisContext& ctx_minus, const HeisContext& ctx_plus, Mode mode,
                          bool* used_oracle = nullptr) {
  const int g = ctx_minus.genus(), p = ctx_minus.p();
  SimpleCob s = SimpleCob::index2(h, alpha, beta);
  step_target_genus(s, g);
  std::optional<HandleSplit> sp;
  if (mode == Mode::closed && p % 2 == 1) sp = split_along_handle(ctx_minus.L(), g, h, p);
  if (!sp) {
    if (used_oracle) *used_oracle = true;
    return F_oracle(s, ctx_minus, ctx_plus);
  }
  if (used_oracle) *used_oracle = false;
  AdaptedClass ac = adapted_class(*sp, g, h, alpha, beta);
  CycMatrix into_split = change_context(ctx_minus, sp->full);
  const std::size_t pp = static_cast<std::size_t>(sp->full.pp());
  CycMatrix factor(sp->rest.dim(), sp->full.dim(), ctx_minus.order());
  for (std::size_t r = 0; r < sp->rest.dim(); ++r)
    for (std::size_t k = 0; k < pp; ++k) factor(r, r * pp + k) = index2_coefficient(ac.alpha, ac.beta, static_cast<long long>(k), p);
  CycMatrix out_of_rest = change_context(sp->rest, ctx_plus);
  return out_of_rest * (factor * into_split);
}

inline CycMatrix F_index2(int h, long long alpha, long long beta, const HeisContext& ctx_minus, Mode mode, bool* used_oracle = nullptr) {
  return F_index2(h, alpha, beta, ctx_minus, propagate_context(SimpleCob::index2(h, alpha, beta), ctx_minus), mode, used_oracle);
}

/// Map of one step between the given contexts.
inline CycMatrix F_step(const SimpleCob& s, const HeisContext& ctx_minus, const HeisContext& ctx_plus, Mode mode,
                        bool* used_oracle = nullptr) {
  if (used_oracle) *used_oracle = false;
  if (mode == Mode::oracle) {
    if (used_oracle) *used_oracle = true;
    return F_oracle(s, ctx_minus, ctx_plus);
  }
  switch (s.kind) {
    case SimpleCob::Kind::cylinder: return F_cylinder(s.f, ctx_minus, ctx_plus);
    case SimpleCob::Kind::index1: return F_index1(s.pos, ctx_minus, ctx_plus);
    case SimpleCob::Kind::index2: return F_index2(s.handle, s.alpha, s.beta, ctx_minus, ctx_plus, mode, used_oracle);
  }
  throw InvalidCobordism("unknown step kind");
}

/// Functor value on a program, between the canonical contexts of source and target.
struct ProgramMap {
  HeisContext source, target;
  CycMatrix matrix;
  std::vector<Lagrangian> lagrangians;
  bool used_oracle = false;
};

inline ProgramMap F_program(const CobordismProgram& prog, int p, Mode mode = Mode::closed) {
  require_supported(p);
  ProgramMap out;
  out.lagrangians = validate(prog);
  out.source = canonical_context(prog.source, p);
  out.target = canonical_context(prog.target, p);
  HeisContext ctx = out.source;
  CycMatrix F = CycMatrix::identity(ctx.dim(), ctx.order());
  for (const auto& s : prog.steps) {
    HeisContext next = propagate_context(s, ctx);
    bool oracle = false;
    F = F_step(s, ctx, next, mode, &oracle) * F;
    out.used_oracle = out.used_oracle || oracle;
    ctx = next;
  }
  out.matrix = change_context(ctx, out.target) * F;
  return out;
}

inline SchrodingerVec F_program(const CobordismProgram& prog, const SchrodingerVec& v, int p, Mode mode = Mode::closed) {
  ProgramMap m = F_program(prog, p, mode);
  if (v.coeffs.size() != m.source.dim()) throw std::invalid_argument("F_program: vector does not match the source");
  return {m.target.pp(), m.target.genus(), m.matrix.apply(v.coeffs)};
}

// ---------------------------------------------------------------------------
// Monoidal structure
// ---------------------------------------------------------------------------

/// Handles of x followed by handles of y.
inline IntVec join_vectors(const IntVec& x, const IntVec& y) {
  const int g1 = static_cast<int>(x.size() / 2), g2 = static_cast<int>(y.size() / 2), g = g1 + g2;
  IntVec r(static_cast<std::size_t>(2 * g), 0);
  for (int i = 0; i < g1; ++i) {
    r[a_index(g, i)] = x[a_index(g1, i)];
    r[b_index(g, i)] = x[b_index(g1, i)];
  }
  for (int i = 0; i < g2; ++i) {
    r[a_index(g, g1 + i)] = y[a_index(g2, i)];
    r[b_index(g, g1 + i)] = y[b_index(g2, i)];
  }
  return r;
}

inline IntMat embed_rows(const IntMat& rows, int g1, int g2, bool first) {
  IntMat out;
  for (const auto& r : rows)
    out.push_back(first ? join_vectors(r, IntVec(static_cast<std::size_t>(2 * g2), 0)) : join_vectors(IntVec(static_cast<std::size_t>(2 * g1), 0), r));
  return out;
}

inline CobObject monoidal_product(const CobObject& x, const CobObject& y) {
  IntMat rows = embed_rows(x.L.basis, x.genus, y.genus, true);
  IntMat r2 = embed_rows(y.L.basis, x.genus, y.genus, false);
  rows.insert(rows.end(), r2.begin(), r2.end());
  return CobObject::make(x.genus + y.genus, rows);
}

inline HeisContext monoidal_product(const HeisContext& x, const HeisContext& y) {
  if (x.p() != y.p()) throw std::invalid_argument("monoidal_product: order mismatch");
  const int g1 = x.genus(), g2 = y.genus();
  IntMat L = embed_rows(x.L(), g1, g2, true), D = embed_rows(x.Ldual(), g1, g2, true);
  IntMat L2 = embed_rows(y.L(), g1, g2, false), D2 = embed_rows(y.Ldual(), g1, g2, false);
  L.insert(L.end(), L2.begin(), L2.end());
  D.insert(D.end(), D2.begin(), D2.end());
  return HeisContext::make(x.p(), standard_form(g1 + g2), L, D);
}

/// Lifts a step acting on one factor of X1 # X2 (the other factor has genus `other`).
inline SimpleCob lift_step(const SimpleCob& s, int g_here, int other, bool first) {
  const int offset = first ? 0 : other;
  switch (s.kind) {
    case SimpleCob::Kind::cylinder: {
      const int g = g_here + other;
      IntMat F = identity(static_cast<std::size_t>(2 * g));
      for (int i = 0; i < 2 * g_here; ++i)
        for (int j = 0; j < 2 * g_here; ++j) {
          auto idx = [&](int t) {
            return t < g_here ? a_index(g, offset + t) : b_index(g, offset + t - g_here);
          };
          F[idx(i)][idx(j)] = s.f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
      return SimpleCob::cylinder(F);
    }
    case SimpleCob::Kind::index1: return SimpleCob::index1(s.pos + offset);
    case SimpleCob::Kind::index2: return SimpleCob::index2(s.handle + offset, s.alpha, s.beta);
  }
  throw InvalidCobordism("unknown step kind");
}

/// prog1 # prog2: the steps of prog1 on the first factor, then those of prog2 on the second.
inline CobordismProgram monoidal_product(const CobordismProgram& p1, const CobordismProgram& p2) {
  CobordismProgram out;
  out.source = monoidal_product(p1.source, p2.source);
  out.target = monoidal_product(p1.target, p2.target);
  int g = p1.source.genus;
  for (const auto& s : p1.steps) {
    out.steps.push_back(lift_step(s, g, p2.source.genus, true));
    g = step_target_genus(s, g);
  }
  int g2 = p2.source.genus;
  for (const auto& s : p2.steps) {
    out.steps.push_back(lift_step(s, g2, p1.target.genus, false));
    g2 = step_target_genus(s, g2);
  }
  return out;
}

inline CycMatrix monoidal_product(const CycMatrix& a, const CycMatrix& b) { return kron(a, b); }

// ---------------------------------------------------------------------------
// Normalized functor
// ---------------------------------------------------------------------------

/// Z of the closure of a single step: 1 for cylinders, index-1 and index-2 along
/// a class of L_-; Z(L(beta', alpha')) for index-2 along alpha' m' + beta' l'.
inline CycNum builtin_closure_factor(const SimpleCob& s, const HeisContext& ctx_minus) {
  const int p = ctx_minus.p(), M = ctx_minus.order();
  if (s.kind != SimpleCob::Kind::index2) return CycNum::one(M);
  auto sp = split_along_handle(ctx_minus.L(), ctx_minus.genus(), s.handle, p);
  if (!sp) throw MissingClosure("index2: L_- does not split along the surgery handle; supply a closure presentation");
  AdaptedClass ac = adapted_class(*sp, ctx_minus.genus(), s.handle, s.alpha, s.beta);
  if (ac.beta == 0) return CycNum::one(M);
  return z_lens(ac.beta, ac.alpha, p);
}

struct NormalizedMap {
  ProgramMap map;  ///< matrix already scaled
  CycNum factor;
};

/// w -> Z(closure) F(w). Without a closure the program must be a single step or consist of cylinders only.
inline NormalizedMap normalized_map(const CobordismProgram& prog, int p, const std::optional<SurgeryPresentation>& closure = std::nullopt,
                                    Mode mode = Mode::closed) {
  ProgramMap m = F_program(prog, p, mode);
  CycNum factor = CycNum::one(field_order(p));
  if (closure) {
    if (!closure->fixed_colors.empty()) throw InvalidPresentation("closure presentation must not fix colors");
    factor = z_invariant(closure->B, p);
  } else if (prog.steps.size() == 1) {
    factor = builtin_closure_factor(prog.steps[0], m.source);
  } else {
    for (const auto& s : prog.steps)
      if (s.kind != SimpleCob::Kind::cylinder) throw MissingClosure("composite program needs a closure presentation");
  }
  m.matrix = factor * m.matrix;
  return {m, factor};
}

}  // namespace abtqft
