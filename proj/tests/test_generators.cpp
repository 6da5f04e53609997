#include <gtest/gtest.h>

#include <set>

#include "anumrad/error.hpp"
#include "anumrad/generators.hpp"
#include "support.hpp"

using namespace anumrad;
using anumrad::test::cases;
using anumrad::test::rel_dist;

TEST(Rng, DeterministicAndInRange) {
  Rng a(123), b(123), c(124);
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  Rng r(5);
  for (int k = 0; k < 10000; ++k) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const auto i = r.uniform_int(3, 7);
    EXPECT_GE(i, 3u);
    EXPECT_LE(i, 7u);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(99);
  const int n = 200000;
  double mean_re = 0, mean_im = 0, var_re = 0, var_im = 0;
  for (int k = 0; k < n; ++k) {
    const cplx z = r.complex_normal();
    mean_re += z.real();
    mean_im += z.imag();
    var_re += z.real() * z.real();
    var_im += z.imag() * z.imag();
  }
  EXPECT_NEAR(mean_re / n, 0.0, 0.01);
  EXPECT_NEAR(mean_im / n, 0.0, 0.01);
  EXPECT_NEAR(var_re / n, 1.0, 0.01);
  EXPECT_NEAR(var_im / n, 1.0, 0.01);
}

TEST(Seeds, StreamsAreDistinctAndStable) {
  const SeedSpec s{42, 7};
  EXPECT_EQ(s.stream_seed(), (SeedSpec{42, 7}).stream_seed());
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const SeedSpec spec{42, t};
    seen.insert(spec.stream_seed());
    seen.insert(spec.substream(1));
    seen.insert(spec.substream(2));
  }
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(Ginibre, Examples) {
  EXPECT_EQ(rand_ginibre(4, 11), rand_ginibre(4, 11));
  EXPECT_NE(rand_ginibre(4, 11), rand_ginibre(4, 12));
  const ComplexMatrix one = rand_ginibre(1, 3);
  EXPECT_EQ(one.rows(), 1u);
  EXPECT_EQ(one.cols(), 1u);
  double total = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ComplexMatrix g = rand_ginibre(4, seed);
    for (const cplx& z : g.entries()) total += std::norm(z);
  }
  EXPECT_NEAR(total / (1000 * 16), 2.0, 0.2);
}

TEST(Psd, Examples) {
  const ComplexMatrix full = rand_psd(4, 4, 1);
  EXPECT_LT(rel_dist(make_context(full).range_projector(), ComplexMatrix::identity(4)), 1e-12);

  const ComplexMatrix r1 = rand_psd(2, 1, 2);
  const auto ev = hermitian_eigenvalues(r1);
  EXPECT_GT(ev[0], 0.0);
  EXPECT_LE(std::abs(ev[1]), kDefaultRankTol * ev[0]);
  EXPECT_THROW(rand_psd(3, 0, 1), Error);
  EXPECT_THROW(rand_psd(3, 4, 1), Error);
}

TEST(Psd, RankAndSpectrum) {
  for (const auto& c : cases(300, 31)) {
    const ComplexMatrix a = rand_psd(c.dim, c.rank, c.seed);
    EXPECT_EQ(a, rand_psd(c.dim, c.rank, c.seed));
    EXPECT_EQ(a, a.adjoint());
    const auto s = psd_spectrum(a, kDefaultRankTol);
    EXPECT_EQ(s.rank, c.rank);
    EXPECT_GE(s.eig.eigenvalues.back(), -1e-12 * s.lambda_max);
  }
}

TEST(InBA, Examples) {
  const auto full = make_context(rand_psd(3, 3, 4));
  Rng rng(77);
  EXPECT_EQ(rand_in_B_A(full, 77, false), rand_ginibre(3, 3, rng));

  const auto d = make_context(ComplexMatrix::diagonal({1, 0}));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(rand_in_B_A(d, seed)(0, 1), cplx(0, 0));
  }
}

TEST(InBA, MembershipResidualAndScale) {
  for (const auto& c : cases(1000, 32)) {
    const auto ctx = make_context(rand_psd(c.dim, c.rank, c.seed));
    const ComplexMatrix t = rand_in_B_A(ctx, c.seed + 1);
    EXPECT_LE(in_B_A(ctx, t).residual, 1e-12);
    const double n = a_op_seminorm(ctx, t);
    EXPECT_GE(n, 0.5 - 1e-12);
    EXPECT_LE(n, 2.0 + 1e-12);
  }
}

TEST(Structured, IdentityWeightGivesHermitianAndPsd) {
  const auto id = make_context(ComplexMatrix::identity(3));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix h = rand_a_selfadjoint(id, seed);
    EXPECT_LT(rel_dist(h.adjoint(), h), 1e-15);
    const ComplexMatrix p = rand_a_positive(id, seed);
    EXPECT_LT(rel_dist(p.adjoint(), p), 1e-15);
    EXPECT_GE(hermitian_eigenvalues(p).back(), -1e-12);
  }
}

TEST(Structured, ResidualsOverManyDraws) {
  for (const auto& c : cases(1000, 33)) {
    const auto ctx = make_context(rand_psd(c.dim, c.rank, c.seed));
    const ComplexMatrix sa = rand_a_selfadjoint(ctx, c.seed + 1);
    EXPECT_LE(a_selfadjoint_residual(ctx, sa), 1e-10);
    EXPECT_LE(in_B_A(ctx, sa).residual, 1e-10);

    const ComplexMatrix pos = rand_a_positive(ctx, c.seed + 2);
    EXPECT_TRUE(is_a_positive(ctx, pos));
    const ComplexMatrix at = ctx.weight() * pos;
    EXPECT_GE(hermitian_eigenvalues(0.5 * (at + at.adjoint())).back(), -1e-10);
    EXPECT_LE(in_B_A(ctx, pos).residual, 1e-10);
  }
}

TEST(Structured, Deterministic) {
  const auto ctx = make_context(rand_psd(5, 2, 8));
  EXPECT_EQ(rand_a_selfadjoint(ctx, 3), rand_a_selfadjoint(ctx, 3));
  EXPECT_EQ(rand_a_positive(ctx, 3), rand_a_positive(ctx, 3));
  EXPECT_EQ(rand_in_B_A(ctx, 3), rand_in_B_A(ctx, 3));
}
