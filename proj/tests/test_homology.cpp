#include "abtqft/homology.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace abtqft;

namespace {

IntVec a(int g, int i) { return unit(static_cast<std::size_t>(2 * g), a_index(g, i)); }
IntVec b(int g, int i) { return unit(static_cast<std::size_t>(2 * g), b_index(g, i)); }

IntMat random_symplectic(std::mt19937_64& rng, int g) {
  // products of elementary transvections along a_i, b_i and a_i + a_j
  const std::size_t n = static_cast<std::size_t>(2 * g);
  IntMat F = identity(n);
  for (int t = 0; t < 8; ++t) {
    IntVec c = rng() % 2 ? a(g, static_cast<int>(rng() % g)) : b(g, static_cast<int>(rng() % g));
    if (g > 1 && rng() % 3 == 0) c = concat(IntVec{1, 1}, IntVec(n - 2, 0));
    const long long s = rng() % 2 ? 1 : -1;
    IntMat T = identity(n);
    for (std::size_t j = 0; j < n; ++j) {
      long long k = s * intersection(c, unit(n, j));
      for (std::size_t i = 0; i < n; ++i) T[i][j] += k * c[i];
    }
    F = matmul(T, F);
  }
  return F;
}

}  // namespace

TEST(Homology, Intersection) {
  EXPECT_EQ(intersection(a(1, 0), b(1, 0)), 1);
  EXPECT_EQ(intersection(b(1, 0), a(1, 0)), -1);
  EXPECT_EQ(intersection(a(2, 0), a(2, 1)), 0);
  const IntVec x{3, -1, 2, 5};
  EXPECT_EQ(intersection(x, x), 0);
  EXPECT_THROW(intersection(IntVec{1, 0}, IntVec{1, 0, 0, 0}), std::invalid_argument);
}

TEST(Homology, IsLagrangian) {
  EXPECT_TRUE(is_lagrangian({a(2, 0), a(2, 1)}, 2));
  EXPECT_FALSE(is_lagrangian({a(1, 0), b(1, 0)}, 1));
  EXPECT_TRUE(is_lagrangian({{1, 2}}, 1));
  EXPECT_FALSE(is_lagrangian({{2, 4}}, 1));  // not primitive
  EXPECT_FALSE(is_lagrangian({a(2, 0)}, 2));  // rank too small
  EXPECT_THROW(Lagrangian::make({a(1, 0), b(1, 0)}, 1), LagrangianError);
}

TEST(Homology, Correspondences) {
  EXPECT_EQ(correspondence_cylinder(identity(2)).basis, row_basis({{-1, 0, 1, 0}, {0, -1, 0, 1}}));
  Correspondence c1 = correspondence_index1(0, 0);
  EXPECT_EQ(c1.g_minus, 0);
  EXPECT_EQ(c1.g_plus, 1);
  EXPECT_EQ(c1.basis, row_basis({{1, 0}}));
  Correspondence c2 = correspondence_index2(1, 0, 1, 0);
  EXPECT_EQ(c2.basis, row_basis({{1, 0}}));
  for (const auto& c : {c1, c2, correspondence_index1(2, 1), correspondence_index2(2, 1, 2, 3)}) EXPECT_TRUE(c.is_lagrangian());
  EXPECT_THROW(correspondence_index2(1, 0, 2, 4), std::invalid_argument);
}

TEST(Homology, LagrangianCompose) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    IntMat f = random_symplectic(rng, 2);
    Lagrangian L = Lagrangian::meridians(2);
    EXPECT_EQ(lagrangian_compose(correspondence_cylinder(f), L), Lagrangian::make(apply_rows(f, L.basis), 2));
  }
  Lagrangian L1 = lagrangian_compose(correspondence_index1(1, 1), Lagrangian::meridians(1));
  EXPECT_EQ(L1, Lagrangian::meridians(2));
  Lagrangian L0 = lagrangian_compose(correspondence_index2(1, 0, 1, 0), Lagrangian::meridians(1));
  EXPECT_EQ(L0.genus, 0);
  EXPECT_TRUE(L0.basis.empty());
}

TEST(Homology, ComposeCorrespondences) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    IntMat f = random_symplectic(rng, 2), g = random_symplectic(rng, 2);
    Correspondence cf = correspondence_cylinder(f), cg = correspondence_cylinder(g);
    EXPECT_EQ(compose_correspondences(cg, cf), correspondence_cylinder(matmul(g, f)));
    EXPECT_EQ(compose_correspondences(correspondence_cylinder(identity(4)), cf), cf);
    // compose then act equals act twice
    Lagrangian L = Lagrangian::make({{1, 0, 1, 0}, {0, 1, 0, 0}}, 2);
    Correspondence c2 = correspondence_index2(2, 1, 1, 2);
    EXPECT_EQ(lagrangian_compose(compose_correspondences(c2, cf), L), lagrangian_compose(c2, lagrangian_compose(cf, L)));
  }
}

TEST(Homology, CancellingPairComposesToGraph) {
  // index-1 at position 1, the transvection along a_1 + a_2, then index-2 on handle 1
  const IntVec c{1, 1, 0, 0};
  IntMat T = identity(4);
  for (std::size_t j = 0; j < 4; ++j) {
    long long k = intersection(c, unit(4, j));
    for (std::size_t i = 0; i < 4; ++i) T[i][j] += k * c[i];
  }
  for (long long alpha = -2; alpha <= 2; ++alpha) {
    Correspondence comp =
        compose_correspondences(correspondence_index2(2, 1, alpha, 1), compose_correspondences(correspondence_cylinder(T), correspondence_index1(1, 1)));
    EXPECT_EQ(comp, correspondence_cylinder({{1, 1}, {0, 1}}));
  }
}

TEST(Homology, SymplecticComplete) {
  auto s = symplectic_complete(1, 0);
  EXPECT_EQ(s.u, 0);
  EXPECT_EQ(s.v, 1);
  s = symplectic_complete(2, 3);
  EXPECT_EQ(s.u, 1);
  EXPECT_EQ(s.v, 2);
  for (long long al = -5; al <= 5; ++al)
    for (long long be = -5; be <= 5; ++be) {
      if (std::gcd(al, be) != 1) continue;
      s = symplectic_complete(al, be);
      EXPECT_EQ(al * s.v - be * s.u, 1);
      EXPECT_TRUE(is_symplectic(symplectic_complete_in_handle(2, 1, al, be), standard_form(2)));
    }
  EXPECT_THROW(symplectic_complete(2, 4), std::invalid_argument);
}

TEST(Homology, ComplementaryLagrangian) {
  const IntMat J = standard_form(2);
  for (const IntMat& L : std::vector<IntMat>{{{1, 0, 0, 0}, {0, 1, 0, 0}}, {{1, 0, 1, 0}, {0, 1, 0, 0}}, {{1, 1, 0, 0}, {0, 0, 1, -1}}, {{1, 0, 2, 0}, {0, 0, 0, 1}}}) {
    IntMat D = complementary_lagrangian(L, J);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_EQ(pairing(L[i], D[j], J), i == j ? 1 : 0);
        EXPECT_EQ(pairing(D[i], D[j], J), 0);
      }
  }
}

TEST(Homology, SymplecticInverse) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    IntMat f = random_symplectic(rng, 2);
    EXPECT_TRUE(is_symplectic(f, standard_form(2)));
    EXPECT_EQ(matmul(symplectic_inverse(f), f), identity(4));
  }
}
