#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anumrad/semihilbert.hpp"

namespace anumrad {

enum class ChainId {
  refine1,
  kit,
  thm1,
  lem_sq,
  thn,
  integral,
  thm3,
  refan,
  corf,
  drog0,
  thm2,
  moradi,
};

enum class IdentityId {
  diez,
  commut,
  s1,
  sharpp,
  block,
  submult,
};

inline constexpr std::array kAllChains = {
    ChainId::refine1, ChainId::kit,   ChainId::thm1,  ChainId::lem_sq,
    ChainId::thn,     ChainId::integral, ChainId::thm3, ChainId::refan,
    ChainId::corf,    ChainId::drog0, ChainId::thm2,  ChainId::moradi,
};

inline constexpr std::array kAllIdentities = {
    IdentityId::diez, IdentityId::commut, IdentityId::s1,
    IdentityId::sharpp, IdentityId::block, IdentityId::submult,
};

enum class Sign { plus, minus };

/// "C_THN", "E_DIEZ", ... as used on the command line and in reports.
std::string_view to_string(ChainId id);
std::string_view to_string(IdentityId id);
std::optional<ChainId> parse_chain_id(std::string_view name);
std::optional<IdentityId> parse_identity_id(std::string_view name);

bool needs_second_operator(ChainId id);
bool takes_sign(ChainId id);
bool needs_second_operator(IdentityId id);
/// Chains / identities whose operators must be A-selfadjoint.
bool requires_selfadjoint(ChainId id);
bool requires_selfadjoint(IdentityId id);

/// a <= b up to tol * (1 + max(1, |b|)).
double allowed_slack(double b, double tol);

struct Term {
  std::string name;
  double value;
};

struct InequalityChainReport {
  ChainId chain;
  std::optional<Sign> sign{};
  std::vector<Term> terms{};
  /// margins[i] = terms[i+1] - terms[i].
  std::vector<double> margins{};
  bool passed = false;
  /// Largest violation absorbed by the slack (0 when strictly monotone).
  double slack_used = 0.0;
  /// Set when a quadrature did not reach its tolerance at the panel cap.
  bool quadrature_warning = false;

  double min_margin() const;
};

struct IdentityClause {
  std::string name;
  double lhs;
  double rhs;
  /// Normalized so that the clause passes iff deviation <= tolerance.
  double deviation;
  double tolerance;
  bool passed;
};

struct IdentityReport {
  IdentityId identity;
  std::vector<IdentityClause> clauses;
  double relative_deviation = 0.0;
  bool passed = false;

  /// min over clauses of (tolerance - deviation).
  double margin() const;
};

/// sqrt((||Re_A T||^2 - ||Im_A T||^2)^2 + 4 ||Re_A T Im_A T||^2), all A-seminorms.
double gamma(const SemiHilbertContext& ctx, const ComplexMatrix& t);
double gamma(const AOperator& t);

struct QuadratureResult {
  double value;
  int panels;
  bool converged;
};

/// Integral over [0, 1] of ||lambda X + (1 - lambda) M||_A by composite
/// Simpson with panel doubling (8 panels up to 2^14).
QuadratureResult integral_mean_norm(const SemiHilbertContext& ctx, const ComplexMatrix& x,
                                    const ComplexMatrix& m);

InequalityChainReport evaluate_chain(ChainId id, const ContextPtr& ctx, const ComplexMatrix& t,
                                     const std::optional<ComplexMatrix>& s = std::nullopt,
                                     Sign sign = Sign::plus);

/// `n` restricts the power clauses of E_S1 to a single exponent.
IdentityReport check_identity(IdentityId id, const ContextPtr& ctx, const ComplexMatrix& t,
                              const std::optional<ComplexMatrix>& s = std::nullopt,
                              std::optional<int> n = std::nullopt);

}  // namespace anumrad
