#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "anumrad/error.hpp"
#include "anumrad/generators.hpp"
#include "anumrad/inequalities.hpp"
#include "support.hpp"

using namespace anumrad;
using anumrad::test::cases;
using anumrad::test::jordan;

namespace {

ContextPtr identity_ctx(std::size_t n) { return share(make_context(ComplexMatrix::identity(n))); }

void expect_terms(const InequalityChainReport& r, std::vector<double> expect, double tol) {
  ASSERT_EQ(r.terms.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    EXPECT_NEAR(r.terms[i].value, expect[i], tol) << r.terms[i].name;
  }
}

ErrorCode chain_error(ChainId id, const ContextPtr& ctx, const ComplexMatrix& t,
                      const std::optional<ComplexMatrix>& s = std::nullopt) {
  try {
    evaluate_chain(id, ctx, t, s);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::context;
}

struct Instance {
  ContextPtr ctx;
  ComplexMatrix t;
  std::optional<ComplexMatrix> s;
};

Instance instance_for(ChainId id, const anumrad::test::Case& c, bool positive = false) {
  auto ctx = share(make_context(rand_psd(c.dim, c.rank, c.seed)));
  auto draw = [&](std::uint64_t seed) {
    if (!requires_selfadjoint(id)) return rand_in_B_A(*ctx, seed);
    return positive ? rand_a_positive(*ctx, seed) : rand_a_selfadjoint(*ctx, seed);
  };
  ComplexMatrix t = draw(c.seed + 1);
  std::optional<ComplexMatrix> s;
  if (needs_second_operator(id)) s = draw(c.seed + 2);
  return {ctx, std::move(t), std::move(s)};
}

}  // namespace

TEST(Names, RoundTrip) {
  for (ChainId id : kAllChains) EXPECT_EQ(parse_chain_id(to_string(id)), id);
  for (IdentityId id : kAllIdentities) EXPECT_EQ(parse_identity_id(to_string(id)), id);
  EXPECT_EQ(to_string(ChainId::integral), "C_INT");
  EXPECT_FALSE(parse_chain_id("C_NOPE"));
  EXPECT_FALSE(parse_identity_id("C_KIT"));
}

TEST(Slack, Formula) {
  EXPECT_DOUBLE_EQ(allowed_slack(0.5, 1e-8), 2e-8);
  EXPECT_DOUBLE_EQ(allowed_slack(-10.0, 1e-8), 11e-8);
  EXPECT_EQ(allowed_slack(3.0, 0.0), 0.0);
}

TEST(Gamma, Examples) {
  const auto id = identity_ctx(2);
  const ComplexMatrix h{{2, cplx(1, 1)}, {cplx(1, -1), -1}};
  const double nh = operator_norm(h);
  EXPECT_NEAR(gamma(*id, h), nh * nh, 1e-12);
  EXPECT_NEAR(gamma(*id, cplx(0, 1) * h), nh * nh, 1e-12);
  EXPECT_NEAR(gamma(*id, jordan()), 0.5, 1e-14);
}

TEST(Gamma, SelfadjointCollapse) {
  for (const auto& c : cases(40, 21)) {
    const auto ctx = make_context(rand_psd(c.dim, c.rank, c.seed));
    const ComplexMatrix t = rand_a_selfadjoint(ctx, c.seed + 1);
    const double n = a_op_seminorm(ctx, t);
    EXPECT_NEAR(gamma(ctx, t), n * n, 1e-8 * n * n);
  }
}

TEST(Quadrature, Examples) {
  const auto id = identity_ctx(2);
  const ComplexMatrix m{{1, 2}, {0, cplx(0, 1)}};
  const double nm = operator_norm(m);
  const auto same = integral_mean_norm(*id, m, m);
  EXPECT_TRUE(same.converged);
  EXPECT_NEAR(same.value, nm, 1e-12);
  EXPECT_NEAR(integral_mean_norm(*id, ComplexMatrix(2, 2), m).value, nm / 2, 1e-10);
  const ComplexMatrix t = jordan();
  const auto fixture = integral_mean_norm(*id, t, 0.5 * (t + t.adjoint()));
  EXPECT_NEAR(fixture.value, 0.75, 1e-8);
}

TEST(Chains, JordanEqualityFixtures) {
  const auto id = identity_ctx(2);
  const auto thn = evaluate_chain(ChainId::thn, id, jordan());
  expect_terms(thn, {0.25, 0.25, 0.25}, 1e-9);
  EXPECT_TRUE(thn.passed);
  const auto kit = evaluate_chain(ChainId::kit, id, jordan());
  expect_terms(kit, {0.5, 0.5, std::numbers::sqrt2 / 2}, 1e-9);
  EXPECT_TRUE(kit.passed);
}

TEST(Chains, ClosedFormExamples) {
  const auto id = identity_ctx(2);
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  expect_terms(evaluate_chain(ChainId::refan, id, i2, i2, Sign::plus), {2, 2, 2}, 1e-12);
  expect_terms(evaluate_chain(ChainId::moradi, id, i2, i2), {2, 2, 2}, 1e-12);
  const ComplexMatrix t = jordan();
  const auto in = evaluate_chain(ChainId::integral, id, t, t.adjoint());
  expect_terms(in, {1, 1.5, 2}, 1e-8);
  EXPECT_FALSE(in.quadrature_warning);
}

TEST(Chains, ReportShape) {
  const auto r = evaluate_chain(ChainId::refan, identity_ctx(2), jordan(), jordan().adjoint(),
                                Sign::minus);
  ASSERT_TRUE(r.sign.has_value());
  EXPECT_EQ(*r.sign, Sign::minus);
  EXPECT_EQ(r.margins.size(), r.terms.size() - 1);
  for (std::size_t i = 0; i < r.margins.size(); ++i) {
    EXPECT_EQ(r.margins[i], r.terms[i + 1].value - r.terms[i].value);
  }
  EXPECT_FALSE(evaluate_chain(ChainId::kit, identity_ctx(2), jordan()).sign.has_value());
}

TEST(Chains, Preconditions) {
  const auto d = share(make_context(ComplexMatrix::diagonal({1, 0})));
  const ComplexMatrix outside{{1, 1}, {0, 1}};
  EXPECT_EQ(chain_error(ChainId::kit, d, outside), ErrorCode::precondition);
  EXPECT_EQ(chain_error(ChainId::moradi, identity_ctx(2), jordan()), ErrorCode::precondition);
  EXPECT_EQ(chain_error(ChainId::lem_sq, identity_ctx(2), jordan(), jordan()),
            ErrorCode::precondition);
  EXPECT_EQ(chain_error(ChainId::kit, nullptr, jordan()), ErrorCode::context);
  try {
    evaluate_chain(ChainId::kit, d, outside);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("in_B_A(T)"), std::string::npos);
  }
}

class ChainProperty : public ::testing::TestWithParam<ChainId> {};

TEST_P(ChainProperty, HoldsOnRandomInstances) {
  const ChainId id = GetParam();
  for (const auto& c : cases(60, 100 + static_cast<int>(id))) {
    for (bool positive : {false, true}) {
      if (positive && !requires_selfadjoint(id)) continue;
      const Instance in = instance_for(id, c, positive);
      for (Sign sign : {Sign::plus, Sign::minus}) {
        if (sign == Sign::minus && !takes_sign(id)) continue;
        const auto r = evaluate_chain(id, in.ctx, in.t, in.s, sign);
        EXPECT_TRUE(r.passed) << to_string(id) << " dim " << c.dim << " rank " << c.rank
                              << " min margin " << r.min_margin();
        EXPECT_FALSE(r.quadrature_warning);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllChains, ChainProperty, ::testing::ValuesIn(kAllChains),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Chains, MiddleTermsSitInsideKittanehSandwich) {
  for (const auto& c : cases(60, 23)) {
    const Instance in = instance_for(ChainId::kit, c);
    const auto kit = evaluate_chain(ChainId::kit, in.ctx, in.t);
    const double lo = kit.terms[0].value;
    const double w = kit.terms[1].value;
    const double tol = kDefaultCmpTol;
    const auto thm1 = evaluate_chain(ChainId::thm1, in.ctx, in.t);
    EXPECT_GE(thm1.terms[1].value, lo - allowed_slack(lo, tol));
    EXPECT_LE(thm1.terms[1].value, w + allowed_slack(w, tol));
    for (ChainId id : {ChainId::thn, ChainId::corf, ChainId::thm2}) {
      const double mid = evaluate_chain(id, in.ctx, in.t).terms[1].value;
      EXPECT_GE(mid, lo * lo - allowed_slack(lo * lo, tol)) << to_string(id);
      EXPECT_LE(mid, w * w + allowed_slack(w * w, tol)) << to_string(id);
    }
  }
}

TEST(Chains, IntegralWithEqualOperatorsIsFlat) {
  for (const auto& c : cases(30, 24)) {
    const Instance in = instance_for(ChainId::kit, c);
    const auto r = evaluate_chain(ChainId::integral, in.ctx, in.t, in.t);
    const double n2 = 2.0 * a_op_seminorm(*in.ctx, in.t);
    for (const auto& term : r.terms) EXPECT_NEAR(term.value, n2, 1e-8);
  }
}

TEST(Identities, DiezJordan) {
  const auto r = check_identity(IdentityId::diez, identity_ctx(2), jordan());
  EXPECT_TRUE(r.passed);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.clauses[i].lhs, 1.0, 1e-12);
}

TEST(Identities, CommutOnSingularDiagonalWeight) {
  const auto ctx = share(make_context(ComplexMatrix::diagonal({1, 1, 0})));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = check_identity(IdentityId::commut, ctx, rand_in_B_A(*ctx, seed),
                                  rand_in_B_A(*ctx, seed + 1000));
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.relative_deviation, 1e-6);
  }
}

TEST(Identities, SharppAtIdentityWeight) {
  const auto id = identity_ctx(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = check_identity(IdentityId::sharpp, id, rand_ginibre(3, seed));
    EXPECT_LE(r.relative_deviation, 1e-12);
  }
}

TEST(Identities, S1SingleExponent) {
  const auto ctx = share(make_context(rand_psd(4, 2, 9)));
  const ComplexMatrix t = rand_a_selfadjoint(*ctx, 10);
  const auto all = check_identity(IdentityId::s1, ctx, t);
  const auto one = check_identity(IdentityId::s1, ctx, t, std::nullopt, 3);
  EXPECT_TRUE(all.passed);
  EXPECT_TRUE(one.passed);
  EXPECT_LT(one.clauses.size(), all.clauses.size());
  EXPECT_THROW(check_identity(IdentityId::s1, ctx, t, std::nullopt, 0), Error);
  EXPECT_THROW(check_identity(IdentityId::s1, ctx, rand_in_B_A(*ctx, 11)), Error);
}

class IdentityProperty : public ::testing::TestWithParam<IdentityId> {};

TEST_P(IdentityProperty, HoldsOnRandomInstances) {
  const IdentityId id = GetParam();
  for (const auto& c : cases(60, 200 + static_cast<int>(id))) {
    const auto ctx = share(make_context(rand_psd(c.dim, c.rank, c.seed)));
    auto draw = [&](std::uint64_t seed) {
      return requires_selfadjoint(id) ? rand_a_selfadjoint(*ctx, seed) : rand_in_B_A(*ctx, seed);
    };
    const ComplexMatrix t = draw(c.seed + 1);
    std::optional<ComplexMatrix> s;
    if (needs_second_operator(id)) s = draw(c.seed + 2);
    const auto r = check_identity(id, ctx, t, s);
    EXPECT_TRUE(r.passed) << to_string(id) << " dim " << c.dim << " rank " << c.rank;
    for (const auto& clause : r.clauses) {
      EXPECT_TRUE(clause.passed) << clause.name << " deviation " << clause.deviation;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllIdentities, IdentityProperty, ::testing::ValuesIn(kAllIdentities),
                         [](const auto& info) { return std::string(to_string(info.param)); });
