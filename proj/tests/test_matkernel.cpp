#include <gtest/gtest.h>

#include <cmath>

#include "anumrad/error.hpp"
#include "anumrad/matkernel.hpp"
#include "support.hpp"

using namespace anumrad;
using anumrad::test::jordan;
using anumrad::test::random_hermitian;
using anumrad::test::random_matrix;
using anumrad::test::rel_dist;

TEST(Matrix, RejectsNonFiniteEntries) {
  std::vector<cplx> data{1.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0};
  EXPECT_THROW(ComplexMatrix(2, 2, data), Error);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), Error);
}

TEST(Matrix, ProductAndAdjoint) {
  const ComplexMatrix a{{1, cplx(0, 1)}, {2, 3}};
  const ComplexMatrix b{{0, 1}, {1, 0}};
  const ComplexMatrix ab{{cplx(0, 1), 1}, {3, 2}};
  EXPECT_EQ(a * b, ab);
  const ComplexMatrix ah{{1, 2}, {cplx(0, -1), 3}};
  EXPECT_EQ(a.adjoint(), ah);
  EXPECT_THROW(a * ComplexMatrix(3, 3), Error);
}

TEST(Eigen, DiagonalInput) {
  const auto e = hermitian_eigendecomposition(ComplexMatrix::diagonal({3, -1}));
  EXPECT_NEAR(e.eigenvalues[0], 3.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], -1.0, 1e-15);
  EXPECT_LT(rel_dist(e.eigenvectors, ComplexMatrix::identity(2)), 1e-15);
}

TEST(Eigen, SwapMatrix) {
  const auto ev = hermitian_eigenvalues(ComplexMatrix{{0, 1}, {1, 0}});
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], -1.0, 1e-14);
}

TEST(Eigen, ReconstructsRandomHermitian) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const ComplexMatrix m = random_hermitian(n, seed);
    const auto e = hermitian_eigendecomposition(m);
    std::vector<double> lam = e.eigenvalues;
    for (std::size_t i = 1; i < n; ++i) EXPECT_GE(lam[i - 1], lam[i]);
    const ComplexMatrix& v = e.eigenvectors;
    const ComplexMatrix rebuilt = v * ComplexMatrix::diagonal(lam) * v.adjoint();
    EXPECT_LE((rebuilt - m).frobenius_norm(), 1e-12 * (1.0 + m.frobenius_norm()));
    EXPECT_LE((v.adjoint() * v - ComplexMatrix::identity(n)).frobenius_norm(), 1e-12 * n);
  }
}

TEST(Eigen, RejectsBadInput) {
  EXPECT_THROW(hermitian_eigendecomposition(ComplexMatrix(2, 3)), Error);
  try {
    hermitian_eigendecomposition(ComplexMatrix{{0, 1}, {0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
}

TEST(Pinv, Examples) {
  EXPECT_LT(rel_dist(moore_penrose_pinv(ComplexMatrix::diagonal({2, 0})),
                     ComplexMatrix::diagonal({0.5, 0})),
            1e-15);
  EXPECT_LT(rel_dist(moore_penrose_pinv(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)),
            1e-15);
  const ComplexMatrix ones{{1, 1}, {1, 1}};
  EXPECT_LT(rel_dist(moore_penrose_pinv(ones), 0.25 * ones), 1e-14);
}

TEST(Pinv, PenroseIdentitiesOnSingularPsd) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const std::size_t r = 1 + seed % (n - 1);
    const ComplexMatrix m = rand_psd(n, r, seed);
    const ComplexMatrix x = moore_penrose_pinv(m);
    EXPECT_LT(rel_dist(m * x * m, m), 1e-10);
    EXPECT_LT(rel_dist(x * m * x, x), 1e-10);
    EXPECT_LT(rel_dist((m * x).adjoint(), m * x), 1e-10);
    EXPECT_LT(rel_dist((x * m).adjoint(), x * m), 1e-10);
    // pinv twice gives M back on its kept spectrum.
    EXPECT_LT(rel_dist(moore_penrose_pinv(x), m), 1e-9);
  }
}

TEST(Pinv, RejectsNegativeAndBadTolerance) {
  try {
    moore_penrose_pinv(ComplexMatrix::diagonal({1, -0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_psd);
  }
  EXPECT_THROW(moore_penrose_pinv(ComplexMatrix::identity(2), 0.0), Error);
  EXPECT_THROW(moore_penrose_pinv(ComplexMatrix::identity(2), 1.0), Error);
  // Tiny negative noise is clamped rather than rejected.
  EXPECT_NO_THROW(psd_sqrt(ComplexMatrix::diagonal({1, -1e-14})));
}

TEST(Sqrt, Examples) {
  EXPECT_LT(rel_dist(psd_sqrt(ComplexMatrix::diagonal({4, 9})), ComplexMatrix::diagonal({2, 3})),
            1e-15);
  EXPECT_LT(rel_dist(psd_sqrt(ComplexMatrix::identity(2)), ComplexMatrix::identity(2)), 1e-15);
  const ComplexMatrix ones{{1, 1}, {1, 1}};
  EXPECT_LT(rel_dist(psd_sqrt(ones), (1.0 / std::sqrt(2.0)) * ones), 1e-14);
}

TEST(Sqrt, SquaresBack) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const ComplexMatrix m = rand_psd(n, 1 + seed % n, seed);
    const ComplexMatrix r = psd_sqrt(m);
    EXPECT_LE((r * r - m).frobenius_norm(), 1e-11 * (1.0 + m.frobenius_norm()));
    EXPECT_LT(rel_dist(r.adjoint(), r), 1e-14);
  }
}

TEST(Projector, Examples) {
  EXPECT_LT(rel_dist(range_projector(ComplexMatrix::diagonal({1, 0})),
                     ComplexMatrix::diagonal({1, 0})),
            1e-15);
  EXPECT_LT(rel_dist(range_projector(ComplexMatrix{{2, 1}, {1, 1}}), ComplexMatrix::identity(2)),
            1e-14);
  const ComplexMatrix ones{{1, 1}, {1, 1}};
  EXPECT_LT(rel_dist(range_projector(ones), 0.5 * ones), 1e-14);
}

TEST(Projector, IdempotentAndFixesRange) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const ComplexMatrix m = rand_psd(n, 1 + seed % n, seed);
    const ComplexMatrix p = range_projector(m);
    EXPECT_LT((p * p - p).frobenius_norm(), 1e-11);
    EXPECT_LT((p.adjoint() - p).frobenius_norm(), 1e-11);
    EXPECT_LT(rel_dist(p * m, m), 1e-10);
  }
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(jordan()), 1.0, 1e-14);
  EXPECT_NEAR(operator_norm(ComplexMatrix::diagonal({3, -1})), 3.0, 1e-14);
  EXPECT_NEAR(operator_norm(ComplexMatrix{{0, 2}, {1, 0}}), 2.0, 1e-14);
  EXPECT_NEAR(operator_norm(ComplexMatrix{{3, 0, 0}, {0, 4, 0}}), 4.0, 1e-14);
}

TEST(OperatorNorm, AdjointInvariant) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const ComplexMatrix m = random_matrix(2 + seed % 6, seed);
    const double a = operator_norm(m);
    EXPECT_NEAR(operator_norm(m.adjoint()), a, 1e-10 * a);
  }
}

TEST(NumericalRadius, Examples) {
  EXPECT_NEAR(numerical_radius(jordan()), 0.5, 1e-12);
  EXPECT_NEAR(numerical_radius(ComplexMatrix::diagonal({1, -2})), 2.0, 1e-12);
  // (|b| + |c|) / 2 for [[0, b], [c, 0]]; frozen against the Monte-Carlo oracle.
  EXPECT_NEAR(numerical_radius(ComplexMatrix{{0, 2}, {1, 0}}), 1.5, 1e-12);
  EXPECT_NEAR(numerical_radius(ComplexMatrix{{cplx(3, 4)}}), 5.0, 1e-15);
  EXPECT_EQ(numerical_radius(ComplexMatrix(3, 3)), 0.0);
  EXPECT_THROW(numerical_radius(ComplexMatrix(2, 3)), Error);
}

TEST(NumericalRadius, NormalMatrixGivesLargestModulus) {
  // U diag(z) U* with U unitary from a Hermitian eigenbasis.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const ComplexMatrix u = hermitian_eigendecomposition(random_hermitian(n, seed)).eigenvectors;
    Rng rng(seed + 100);
    ComplexMatrix d(n, n);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d(i, i) = rng.complex_normal();
      best = std::max(best, std::abs(d(i, i)));
    }
    EXPECT_NEAR(numerical_radius(u * d * u.adjoint()), best, 1e-9 * (1.0 + best));
  }
}

TEST(NumericalRadius, SandwichAndSampledLowerBound) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 6;
    const ComplexMatrix m = random_matrix(n, seed);
    const double w = numerical_radius(m);
    const double nm = operator_norm(m);
    EXPECT_LE(w, nm * (1 + 1e-12));
    EXPECT_LE(nm, 2.0 * w * (1 + 1e-12));
    Rng rng(seed ^ 0xabc);
    for (int k = 0; k < 200; ++k) {
      CVector x(n);
      for (auto& z : x) z = rng.complex_normal();
      const double nx = vector_norm(x);
      const cplx q = inner(m * std::span<const cplx>(x), x) / (nx * nx);
      EXPECT_LE(std::abs(q), w + 1e-12);
    }
  }
}

TEST(SpectralRadius, Examples) {
  EXPECT_EQ(spectral_radius_gelfand(jordan()), 0.0);
  EXPECT_NEAR(spectral_radius_gelfand(ComplexMatrix::diagonal({3, -1})), 3.0, 1e-9);
  EXPECT_NEAR(spectral_radius_gelfand(ComplexMatrix{{0, 2}, {1, 0}}), std::sqrt(2.0), 1e-9);
  const double c = std::cos(0.7), s = std::sin(0.7);
  EXPECT_NEAR(spectral_radius_gelfand(ComplexMatrix{{c, -s}, {s, c}}), 1.0, 1e-9);
}

TEST(SpectralRadius, BelowNumericalRadiusAndPowerRule) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ComplexMatrix m = random_matrix(2 + seed % 6, seed);
    const double r = spectral_radius_gelfand(m);
    EXPECT_LE(r, numerical_radius(m) + 1e-6);
    EXPECT_NEAR(spectral_radius_gelfand(m * m), r * r, 1e-6 * (1 + r * r));
  }
}

TEST(SpectralRadius, HermitianMatchesEigenvalues) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix h = random_hermitian(2 + seed % 5, seed);
    const auto ev = hermitian_eigenvalues(h);
    const double expect = std::max(std::abs(ev.front()), std::abs(ev.back()));
    EXPECT_NEAR(spectral_radius_gelfand(h), expect, 1e-6 * expect);
  }
}

TEST(Sym2x2, ClosedFormExamples) {
  EXPECT_NEAR(sym2x2_spectral_radius(1, 0, 1), 1.0, 1e-15);
  EXPECT_NEAR(sym2x2_spectral_radius(1, 1, 1), 2.0, 1e-15);
  EXPECT_NEAR(sym2x2_spectral_radius(4, 2, 1), 5.0, 1e-15);
}

TEST(Sym2x2, MatchesGelfand) {
  Rng rng(77);
  for (int k = 0; k < 50; ++k) {
    const double a = 3 * rng.uniform(), b = 3 * rng.uniform(), c = 3 * rng.uniform();
    const double g = spectral_radius_gelfand(ComplexMatrix{{a, b}, {b, c}});
    EXPECT_NEAR(sym2x2_spectral_radius(a, b, c), g, 1e-6 * (1 + g));
  }
}

TEST(Golden, FindsInteriorMaximum) {
  const auto r = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1,
                                         1e-12);
  EXPECT_NEAR(r.x, 0.3, 1e-6);
  EXPECT_NEAR(r.fx, 0.0, 1e-12);
}
