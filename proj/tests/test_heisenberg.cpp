#include "abtqft/cobordism.hpp"
#include "abtqft/heisenberg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace abtqft;

namespace {

HeisIntegral random_integral(std::mt19937_64& rng, int g) {
  HeisIntegral h{static_cast<long long>(rng() % 21) - 10, IntVec(static_cast<std::size_t>(2 * g))};
  for (auto& v : h.x) v = static_cast<long long>(rng() % 13) - 6;
  return h;
}

std::vector<HeisContext> contexts() {
  std::vector<HeisContext> out;
  for (int p : {3, 4, 5, 8}) {
    out.push_back(HeisContext::standard(p, 1));
    out.push_back(HeisContext::make(p, standard_form(1), {{2, 3}}));
    out.push_back(HeisContext::standard(p, 2));
    out.push_back(HeisContext::make(p, standard_form(2), {{1, 0, 1, 0}, {0, 1, 0, 0}}));
    out.push_back(HeisContext::make(p, standard_form(2), {{1, 1, 0, 0}, {0, 0, 1, -1}}));
  }
  return out;
}

}  // namespace

TEST(Heisenberg, IntegralLaw) {
  EXPECT_EQ(heis_mul_integral({1, {1, 0}}, {2, {0, 1}}), (HeisIntegral{4, {1, 1}}));
  HeisIntegral h{7, {2, -3, 1, 5}};
  EXPECT_EQ(heis_mul_integral(h, heis_inverse_integral(h)), (HeisIntegral{0, {0, 0, 0, 0}}));
  HeisIntegral c = heis_mul_integral(heis_mul_integral(heis_mul_integral({0, {1, 0}}, {0, {0, 1}}), {0, {-1, 0}}), {0, {0, -1}});
  EXPECT_EQ(c, (HeisIntegral{2, {0, 0}}));
}

TEST(Heisenberg, ToFinite) {
  HeisContext c5 = HeisContext::standard(5, 1);
  EXPECT_EQ(c5.to_finite({5, {0, 0}}), c5.unit());
  EXPECT_EQ(c5.to_finite({0, {5, 5}}), c5.unit());
  EXPECT_EQ(c5.to_finite({0, {1, 1}}), (HeisSplit{1, {1}, {1}}));
  HeisContext c4 = HeisContext::standard(4, 1);
  EXPECT_EQ(c4.to_finite({0, {2, 2}}), c4.unit());
  EXPECT_EQ(c4.to_finite({4, {0, 0}}), c4.unit());
}

TEST(Heisenberg, ToFiniteIsHomomorphism) {
  std::mt19937_64 rng(11);
  for (const auto& ctx : contexts()) {
    for (int t = 0; t < 20; ++t) {
      HeisIntegral x = random_integral(rng, ctx.genus()), y = random_integral(rng, ctx.genus());
      EXPECT_EQ(ctx.to_finite(heis_mul_integral(x, y)), ctx.mul(ctx.to_finite(x), ctx.to_finite(y)));
      EXPECT_EQ(ctx.to_finite(ctx.lift(ctx.to_finite(x))), ctx.to_finite(x));
    }
  }
}

TEST(Heisenberg, SchrodingerAction) {
  const int p = 5;
  HeisContext ctx = HeisContext::standard(p, 1);
  for (long long c = 0; c < 5; ++c) {
    SchrodingerVec v{5, 1, ctx.basis_vector({c})};
    SchrodingerVec w = schrodinger_act({1, {0}, {0}}, v, ctx);
    EXPECT_EQ(w.coeffs[static_cast<std::size_t>(c)], q_power(p, 1));
    w = schrodinger_act({0, {0}, {2}}, v, ctx);
    EXPECT_EQ(w.coeffs, ctx.basis_vector({mod(c + 2, 5)}));
    w = schrodinger_act({0, {3}, {0}}, v, ctx);
    EXPECT_EQ(w.coeffs[static_cast<std::size_t>(c)], q_power(p, 2 * 3 * c));
  }
}

TEST(Heisenberg, ActionIsRepresentation) {
  std::mt19937_64 rng(12);
  for (const auto& ctx : contexts()) {
    for (int t = 0; t < 10; ++t) {
      HeisSplit x = ctx.to_finite(random_integral(rng, ctx.genus())), y = ctx.to_finite(random_integral(rng, ctx.genus()));
      EXPECT_EQ(ctx.action(ctx.mul(x, y)), ctx.action(x).after(ctx.action(y)));
    }
  }
}

TEST(Heisenberg, InducedModule) {
  for (const auto& ctx : contexts()) {
    auto gens = ctx.generator_actions();
    EXPECT_EQ(gens.size(), static_cast<std::size_t>(2 * ctx.genus() + 1));
    EXPECT_EQ(gens[0].dim(), ipow(static_cast<std::size_t>(ctx.pp()), ctx.genus()));
    EXPECT_EQ(gens[0].dense(), q_power(ctx.p(), 1) * CycMatrix::identity(ctx.dim(), ctx.order()));
  }
  // p = 3, g = 1: the dual generator cyclically permutes the three labels
  HeisContext c3 = HeisContext::standard(3, 1);
  MonomialOp t = c3.action(HeisIntegral{0, {0, 1}});
  MonomialOp t3 = t.after(t).after(t);
  EXPECT_NE(t.target, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(t3.dense(), CycMatrix::identity(3, c3.order()));
}

TEST(Heisenberg, CommutantDimension) {
  for (int g : {1, 2})
    for (int p : {3, 4, 5}) {
      HeisContext ctx = HeisContext::standard(p, g);
      std::vector<CycMatrix> mats;
      for (const auto& op : ctx.generator_actions()) mats.push_back(op.dense());
      EXPECT_EQ(commutant_dim(mats), 1u) << "g=" << g << " p=" << p;
    }
  HeisContext ctx = HeisContext::standard(3, 1);
  std::vector<CycMatrix> doubled;
  for (const auto& op : ctx.generator_actions()) doubled.push_back(kron(CycMatrix::identity(2, ctx.order()), op.dense()));
  EXPECT_EQ(commutant_dim(doubled), 4u);
}

TEST(Heisenberg, RightBoundaryAction) {
  const int p = 5;
  Correspondence C = correspondence_cylinder(identity(2));
  HeisContext ctxC = HeisContext::make(p, C.form(), C.basis);
  EXPECT_EQ(right_act_boundary({1, {0, 0}}, ctxC, 1).dense(), q_power(p, 1) * CycMatrix::identity(ctxC.dim(), ctxC.order()));
  for (const IntVec& x : std::vector<IntVec>{{1, 0}, {0, 1}})
    for (const IntVec& y : std::vector<IntVec>{{1, 0}, {0, 1}}) {
      MonomialOp r = right_act_boundary({0, x}, ctxC, 1);
      MonomialOp l = ctxC.action(HeisIntegral{0, iota_plus(y, 1)});
      EXPECT_EQ(r.after(l), l.after(r));
    }
}

TEST(Heisenberg, BimoduleTensor) {
  const int p = 3;
  HeisContext ctx = HeisContext::standard(p, 1);
  std::size_t qd = 0;
  SimpleCob id = SimpleCob::cylinder(identity(2));
  CycMatrix F = F_oracle(id, ctx, propagate_context(id, ctx), &qd);
  EXPECT_EQ(qd, 3u);
  EXPECT_EQ(F, CycMatrix::identity(3, ctx.order()));
  for (int pp : {3, 4, 5}) {
    HeisContext c = HeisContext::standard(pp, 1);
    SimpleCob s = SimpleCob::index2(0, 1, 0);
    CycMatrix G = F_oracle(s, c, propagate_context(s, c), &qd);
    EXPECT_EQ(qd, 1u);
    for (std::size_t k = 0; k < c.dim(); ++k) EXPECT_EQ(G(0, k), k == 0 ? CycNum::one(c.order()) : CycNum::zero(c.order()));
  }
}
