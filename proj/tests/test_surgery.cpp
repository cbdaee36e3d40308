#include "abtqft/surgery.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace abtqft;

namespace {

using cplx = std::complex<double>;

cplx numeric(const CycNum& x) { return to_complex(x); }

// Signature from Jacobi eigenvalues.
int numeric_signature(const IntMat& B) {
  const std::size_t n = B.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = static_cast<double>(B[i][j]);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += A[i][j] * A[i][j];
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(A[p][q]) < 1e-300) continue;
        double theta = (A[q][q] - A[p][p]) / (2 * A[p][q]);
        double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = A[k][p], akq = A[k][q];
          A[k][p] = c * akp - s * akq;
          A[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = A[p][k], aqk = A[q][k];
          A[p][k] = c * apk - s * aqk;
          A[q][k] = s * apk + c * aqk;
        }
      }
  }
  int sig = 0;
  for (std::size_t i = 0; i < n; ++i) sig += A[i][i] > 1e-9 ? 1 : A[i][i] < -1e-9 ? -1 : 0;
  return sig;
}

// kappa^{-sigma} eta^{n+1} sum_k q^{k^T B k} in floating point.
cplx numeric_z(const IntMat& B, int p) {
  const double pi = std::acos(-1.0);
  const int pp = p % 2 ? p : p / 2;
  auto q = [&](long long e) { return std::polar(1.0, 2 * pi * static_cast<double>(e % p) / p); };
  cplx g = 0;
  for (int k = 0; k < pp; ++k) g += q(static_cast<long long>(k) * k);
  const double eta = 1 / std::abs(g);
  const cplx kappa = g * eta;
  const std::size_t n = B.size();
  cplx sum = 0;
  std::vector<long long> k(n, 0);
  while (true) {
    long long e = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) e += B[i][j] * k[i] * k[j];
    sum += q(((e % p) + p) % p);
    std::size_t i = 0;
    while (i < n && ++k[i] == pp) k[i++] = 0;
    if (i == n) break;
  }
  return std::pow(kappa, -numeric_signature(B)) * std::pow(eta, static_cast<double>(n + 1)) * sum;
}

IntMat random_symmetric(std::mt19937_64& rng, std::size_t n, int bound) {
  IntMat B = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) B[i][j] = B[j][i] = static_cast<long long>(rng() % static_cast<unsigned>(2 * bound + 1)) - bound;
  return B;
}

}  // namespace

TEST(Surgery, Signature) {
  EXPECT_EQ(signature({}), 0);
  EXPECT_EQ(signature({{0}}), 0);
  EXPECT_EQ(signature({{-3}}), -1);
  EXPECT_EQ(signature({{0, 1}, {1, 0}}), 0);
  EXPECT_EQ(signature({{2, 1}, {1, 2}}), 2);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    IntMat B = random_symmetric(rng, 1 + rng() % 5, 4);
    EXPECT_EQ(signature(B), numeric_signature(B)) << to_string(B);
  }
}

TEST(Surgery, Bracket) {
  for (long long i = 0; i < 5; ++i)
    for (long long j = 0; j < 5; ++j) EXPECT_EQ(bracket({{0, 1}, {1, 0}}, {i, j}, 5), q_power(5, 2 * i * j));
  EXPECT_EQ(bracket({{3, -2}, {-2, 1}}, {0, 0}, 5), CycNum::one(40));
  for (long long k = 0; k < 7; ++k) EXPECT_EQ(bracket({{1}}, {k}, 7), q_power(7, k * k));
}

TEST(Surgery, ZInvariantExamples) {
  for (int p : {3, 4, 5, 7, 8, 12}) {
    const auto& ek = eta_kappa(p);
    EXPECT_EQ(z_invariant({}, p), ek.eta);
    EXPECT_EQ(z_invariant({{0}}, p), CycNum::one(field_order(p)));
    EXPECT_EQ(z_invariant({{1}}, p), ek.eta);
    EXPECT_EQ(z_invariant({{-1}}, p), ek.eta);
  }
  const auto& ek = eta_kappa(3);
  EXPECT_EQ(z_lens(2, 1, 3), ek.kappa.inverse() * ek.eta * ek.eta * (CycNum::one(24) + CycNum(24, Rational(2)) * q_power(3, 2)));
  EXPECT_THROW(z_invariant({{1}}, 6), UnsupportedOrder);
  EXPECT_THROW(z_invariant({{1, 2}, {3, 1}}, 5), InvalidPresentation);
}

TEST(Surgery, ZInvariantMatchesNumericOracle) {
  std::mt19937_64 rng(22);
  for (int p : {3, 4, 5, 7, 8, 12}) {
    for (int t = 0; t < 12; ++t) {
      IntMat B = random_symmetric(rng, rng() % 4, 3);
      EXPECT_LT(std::abs(numeric(z_invariant(B, p)) - numeric_z(B, p)), 1e-9) << "p=" << p << " B=" << to_string(B);
    }
  }
}

TEST(Surgery, MatrixElement) {
  for (long long i = 0; i < 3; ++i)
    for (long long j = 0; j < 3; ++j) EXPECT_EQ(matrix_element({{{0, 1}, {1, 0}}, {{0, i}, {1, j}}}, 0, 3), q_power(3, 2 * i * j));
  for (int p : {3, 5}) {
    const CycNum eta = eta_kappa(p).eta;
    for (long long k = 0; k < p; ++k) {
      CycNum v = matrix_element({{{0, 1}, {1, 0}}, {{0, k}}}, 0, p);
      EXPECT_EQ(v, k == 0 ? CycNum(field_order(p), Rational(p)) * eta : CycNum::zero(field_order(p)));
    }
  }
  EXPECT_THROW(matrix_element({{{1}}, {{3, 0}}}, 0, 5), InvalidPresentation);
}

TEST(Surgery, ContinuedFraction) {
  EXPECT_EQ(continued_fraction(2, 1), (std::vector<long long>{2}));
  EXPECT_EQ(continued_fraction(3, 2), (std::vector<long long>{2, 2}));
  EXPECT_EQ(continued_fraction(3, 1), (std::vector<long long>{3}));
  EXPECT_EQ(continued_fraction(5, 2), (std::vector<long long>{3, 2}));
  EXPECT_TRUE(continued_fraction(1, 0).empty());
  EXPECT_THROW(continued_fraction(0, 1), InvalidPresentation);
  EXPECT_THROW(continued_fraction(4, 2), InvalidPresentation);
  // the chain determinant (continuant) is beta up to sign
  for (long long beta = 1; beta <= 12; ++beta)
    for (long long alpha = -beta; alpha <= beta; ++alpha) {
      if (std::gcd(beta, alpha) != 1) continue;
      auto m = continued_fraction(beta, alpha);
      long long prev = 1, cur = 1;
      for (std::size_t i = 0; i < m.size(); ++i) {
        long long next = (i == 0 ? m[0] : m[i] * cur - prev);
        prev = i == 0 ? 1 : cur;
        cur = next;
      }
      EXPECT_EQ(std::llabs(m.empty() ? 1 : cur), beta) << beta << "/" << alpha;
    }
}

TEST(Surgery, LensSpacesAreOrientedHomotopyInvariants) {
  // L(b, a) and L(b, a + b) are the same manifold
  for (int p : {3, 5, 7})
    for (long long b = 1; b <= 7; ++b)
      for (long long a = -b; a <= b; ++a) {
        if (std::gcd(a, b) != 1) continue;
        EXPECT_EQ(z_lens(b, a, p), z_lens(b, a + b, p));
        EXPECT_EQ(z_lens(b, a, p), z_lens(-b, -a, p));
      }
}

TEST(Surgery, RefinementClasses) {
  auto spin1 = refinement_classes({{1}}, RefinementKind::spin);
  ASSERT_EQ(spin1.size(), 1u);
  EXPECT_EQ(spin1[0].bits, (std::vector<int>{1}));
  auto spin0 = refinement_classes({{0}}, RefinementKind::spin);
  ASSERT_EQ(spin0.size(), 2u);
  EXPECT_EQ(spin0[0].bits, (std::vector<int>{0}));
  EXPECT_EQ(spin0[1].bits, (std::vector<int>{1}));
  EXPECT_EQ(refinement_classes({{2}}, RefinementKind::cohomology).size(), 2u);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    IntMat B = random_symmetric(rng, 1 + rng() % 4, 3);
    for (auto kind : {RefinementKind::spin, RefinementKind::cohomology}) {
      auto cls = refinement_classes(B, kind);
      // count solutions by brute force
      std::size_t n = B.size(), count = 0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        RefinementClass c{kind, {}};
        for (std::size_t i = 0; i < n; ++i) c.bits.push_back((mask >> i) & 1);
        if (satisfies_system(B, c)) ++count;
      }
      EXPECT_EQ(cls.size(), count);
      for (const auto& c : cls) EXPECT_TRUE(satisfies_system(B, c));
    }
  }
}

TEST(Surgery, RefinedInvariantPreconditions) {
  EXPECT_THROW(refined_invariant({{1}}, {RefinementKind::spin, {1}}, 8), UnsupportedOrder);
  EXPECT_THROW(refined_invariant({{1}}, {RefinementKind::cohomology, {0}}, 12), UnsupportedOrder);
  EXPECT_THROW(refined_invariant({{1}}, {RefinementKind::spin, {0}}, 12), InvalidPresentation);
}

TEST(Surgery, ParitySplitOfTheKirbyColor) {
  // summing the parity-restricted Gauss sums over all parity vectors gives the full sum
  std::mt19937_64 rng(24);
  for (int p : {8, 12, 16, 20}) {
    for (int t = 0; t < 8; ++t) {
      IntMat B = random_symmetric(rng, 1 + rng() % 3, 3);
      const std::size_t n = B.size();
      CycNum total = CycNum::zero(field_order(p));
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> bits;
        for (std::size_t i = 0; i < n; ++i) bits.push_back((mask >> i) & 1);
        total += detail::histogram_value(detail::color_histogram(B, p, {}, &bits), p);
      }
      EXPECT_EQ(total, detail::histogram_value(detail::color_histogram(B, p, {}), p));
    }
  }
}

TEST(Surgery, KirbyMoves) {
  EXPECT_EQ(kirby_transform({}, KirbyMove::blowup(1)), (IntMat{{1}}));
  EXPECT_EQ(kirby_transform({{0, 1}, {1, 0}}, KirbyMove::slide(0, 1, 1)), (IntMat{{2, 1}, {1, 0}}));
  EXPECT_THROW(kirby_transform({{0, 1}, {1, 0}}, KirbyMove::slide(0, 0, 1)), InvalidPresentation);
  EXPECT_THROW(kirby_transform({{0, 1}, {1, 0}}, KirbyMove::slide(0, 2, 1)), InvalidPresentation);
  std::mt19937_64 rng(25);
  for (int p : {3, 4, 5, 8}) {
    for (int t = 0; t < 5; ++t) {
      IntMat B = random_symmetric(rng, 2 + rng() % 2, 2);
      const CycNum Z = z_invariant(B, p);
      IntMat C = B;
      for (int s = 0; s < 10; ++s) {
        std::size_t i = rng() % C.size(), j = (i + 1 + rng() % (C.size() - 1)) % C.size();
        C = kirby_transform(C, KirbyMove::slide(i, j, rng() % 2 ? 1 : -1));
        EXPECT_EQ(z_invariant(C, p), Z);
      }
      EXPECT_EQ(z_invariant(kirby_transform(C, KirbyMove::blowup(-1)), p), Z);
    }
  }
}
