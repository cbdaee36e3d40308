#include "abtqft/mcg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace abtqft;
using namespace abtqft::twists;

namespace {

FreeWord random_word(std::mt19937_64& rng, int g, int len) {
  FreeWord w;
  for (int i = 0; i < len; ++i) {
    int l = 1 + static_cast<int>(rng() % static_cast<unsigned>(2 * g));
    w.letters.push_back(rng() % 2 ? l : -l);
  }
  return w;
}

// Central part of the Heisenberg image of the letters of handle i.
long long central_part(const FreeWord& w, int g, int i) {
  HeisIntegral acc{0, {0, 0}};
  for (int x : w.letters) {
    const int l = std::abs(x);
    HeisIntegral h{0, {0, 0}};
    if (l == i + 1)
      h.x[0] = 1;
    else if (l == g + i + 1)
      h.x[1] = 1;
    else
      continue;
    if (x < 0) h = heis_inverse_integral(h);
    acc = heis_mul_integral(acc, h);
  }
  return acc.k;
}

}  // namespace

TEST(Mcg, FreeWords) {
  FreeWord w{{1, 2, -2, 3}};
  EXPECT_EQ(w.reduced(), (FreeWord{{1, 3}}));
  EXPECT_EQ((w * w.inverse()).reduced(), FreeWord{});
  EXPECT_EQ(FreeWord({{1, -2, 1}}).abelianize(1), (IntVec{2, -1}));
  EXPECT_THROW(FreeWord({{5}}).abelianize(2), InvalidMappingClass);
  EXPECT_THROW(FreeWord({{1, 0}}).reduced(), InvalidMappingClass);
}

TEST(Mcg, BraidPhi) {
  using K = BraidLetter::Kind;
  EXPECT_EQ(braid_phi({{K::sigma, 0, 1}}, 1), (HeisIntegral{1, {0, 0}}));
  EXPECT_EQ(braid_phi({{K::alpha, 0, 1}, {K::beta, 0, 1}, {K::alpha, 0, -1}, {K::beta, 0, -1}}, 1), (HeisIntegral{2, {0, 0}}));
  EXPECT_EQ(braid_phi({{K::sigma, 0, 1}, {K::alpha, 1, 1}, {K::sigma, 0, -1}, {K::alpha, 1, -1}}, 2), (HeisIntegral{0, {0, 0, 0, 0}}));
  EXPECT_EQ(braid_phi({{K::alpha, 0, 1}, {K::sigma, 2, 1}, {K::beta, 0, 1}}, 1), (HeisIntegral{2, {1, 1}}));
  EXPECT_THROW(braid_phi({{K::beta, 1, 1}}, 1), std::invalid_argument);
  EXPECT_THROW(braid_phi({{K::sigma, 0, 2}}, 1), std::invalid_argument);
}

TEST(Mcg, MoritaD) {
  EXPECT_EQ(morita_d(FreeWord::alpha(0) * FreeWord::beta(1, 0), 1, 0), 1);
  EXPECT_EQ(morita_d(FreeWord::beta(1, 0) * FreeWord::alpha(0), 1, 0), -1);
  EXPECT_EQ(morita_d(FreeWord::alpha(0), 1, 0), 0);
  std::mt19937_64 rng(41);
  for (int g : {1, 2, 3})
    for (int t = 0; t < 100; ++t) {
      FreeWord w = random_word(rng, g, 1 + static_cast<int>(rng() % 12));
      for (int i = 0; i < g; ++i) EXPECT_EQ(morita_d(w, g, i), central_part(w, g, i));
    }
}

TEST(Mcg, MappingClasses) {
  for (int g : {1, 2})
    for (const auto& f : generators(g)) {
      EXPECT_TRUE(is_symplectic(f.matrix(), standard_form(g)));
      EXPECT_EQ(f.after(f.inverse()), MappingClass::identity_class(g));
    }
  IntMat ta = t_alpha(1, 0).matrix();
  EXPECT_EQ(ta[0][0], 1);
  EXPECT_EQ(ta[1][0], 0);
  EXPECT_EQ(std::llabs(ta[0][1]), 1);
  EXPECT_THROW(MappingClass::make(1, {FreeWord::alpha(0)}), InvalidMappingClass);
  EXPECT_THROW(MappingClass::make(1, {FreeWord::beta(1, 0), FreeWord::beta(1, 0)}), InvalidMappingClass);
  EXPECT_THROW(MappingClass::make(1, {FreeWord::alpha(0), FreeWord::beta(1, 0)}, std::vector<FreeWord>{FreeWord::alpha(0), FreeWord::alpha(0)}),
               InvalidMappingClass);
}

TEST(Mcg, Theta) {
  for (int g : {1, 2}) EXPECT_EQ(theta(MappingClass::identity_class(g)), IntVec(static_cast<std::size_t>(2 * g), 0));
  EXPECT_THROW(t_dual({1, 0}, 4), UnsupportedOrder);
  // theta(x) = 2 t.x mod p
  std::mt19937_64 rng(42);
  for (int p : {3, 5, 7})
    for (int t = 0; t < 20; ++t) {
      IntVec th{static_cast<long long>(rng() % 9) - 4, static_cast<long long>(rng() % 9) - 4, static_cast<long long>(rng() % 9) - 4,
                static_cast<long long>(rng() % 9) - 4};
      IntVec td = t_dual(th, p);
      for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(mod(theta_value(th, unit(4, j)) - 2 * intersection(td, unit(4, j)), p), 0);
    }
}

TEST(Mcg, Cocycle) {
  for (int p : {3, 5})
    for (int g : {1, 2}) {
      MappingClass id = MappingClass::identity_class(g);
      for (const auto& f : generators(g)) {
        EXPECT_EQ(cocycle_c(id, f, p), 0);
        EXPECT_EQ(cocycle_c(f, id, p), 0);
        EXPECT_EQ(cocycle_c(f, f.inverse(), p), cocycle_c_inverse(f, f.inverse(), p));
      }
    }
}

TEST(Mcg, WeilIntertwiners) {
  for (int p : {3, 5}) {
    HeisContext ctx = HeisContext::standard(p, 1);
    EXPECT_EQ(weil_intertwiner(identity(2), ctx), CycMatrix::identity(ctx.dim(), ctx.order()));
    CycMatrix T = weil_intertwiner(t_alpha(1, 0).matrix(), ctx);
    for (std::size_t i = 0; i < ctx.dim(); ++i)
      for (std::size_t j = 0; j < ctx.dim(); ++j) {
        if (i != j) {
          EXPECT_TRUE(T(i, j).is_zero());
        }
      }
    for (const auto& f : generators(1)) {
      CycMatrix S = weil_intertwiner(f.matrix(), ctx);
      EXPECT_TRUE(intertwines(S, f.matrix(), ctx, {{0, {1, 0}}, {0, {0, 1}}, {1, {0, 0}}}));
    }
  }
}

TEST(Mcg, ProjectiveDefect) {
  CycMatrix I = CycMatrix::identity(3, 24);
  EXPECT_EQ(projective_defect(I, I, I), CycNum::one(24));
  CycMatrix twoI = CycNum(24, Rational(2)) * I;
  EXPECT_EQ(projective_defect(twoI, I, I), CycNum(24, Rational(2)));
  CycMatrix P = CycMatrix::identity(3, 24);
  P(0, 0) = CycNum(24, Rational(5));
  EXPECT_THROW(projective_defect(P, I, I), NotProjective);
  HeisContext ctx = HeisContext::standard(3, 1);
  MappingClass id = MappingClass::identity_class(1);
  for (const auto& f : generators(1)) EXPECT_EQ(measured_cocycle(id, f, ctx), CycNum::one(ctx.order()));
}
