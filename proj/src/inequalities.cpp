#include "anumrad/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "anumrad/error.hpp"

namespace anumrad {

namespace {

struct ChainName {
  ChainId id;
  std::string_view name;
};

constexpr std::array<ChainName, 12> kChainNames{{
    {ChainId::refine1, "C_REFINE1"},
    {ChainId::kit, "C_KIT"},
    {ChainId::thm1, "C_THM1"},
    {ChainId::lem_sq, "C_LEM_SQ"},
    {ChainId::thn, "C_THN"},
    {ChainId::integral, "C_INT"},
    {ChainId::thm3, "C_THM3"},
    {ChainId::refan, "C_REFAN"},
    {ChainId::corf, "C_CORF"},
    {ChainId::drog0, "C_DROG0"},
    {ChainId::thm2, "C_THM2"},
    {ChainId::moradi, "C_MORADI"},
}};

struct IdentityName {
  IdentityId id;
  std::string_view name;
};

constexpr std::array<IdentityName, 6> kIdentityNames{{
    {IdentityId::diez, "E_DIEZ"},
    {IdentityId::commut, "E_COMMUT"},
    {IdentityId::s1, "E_S1"},
    {IdentityId::sharpp, "E_SHARPP"},
    {IdentityId::block, "E_BLOCK"},
    {IdentityId::submult, "E_SUBMULT"},
}};

constexpr double kEqualityTol = 1e-8;
constexpr double kGelfandTol = 1e-6;
constexpr double kMatrixIdentityTol = 1e-9;
constexpr double kPowerTol = 1e-7;

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

[[noreturn]] void precondition_failure(const std::string& check, double residual) {
  throw Error(ErrorCode::precondition,
              "precondition failed: " + check + " (residual " + std::to_string(residual) + ")",
              residual);
}

void require_in_B_A(const AOperator& op, const char* label) {
  const Membership& m = op.membership();
  if (!m.holds) precondition_failure(std::string("in_B_A(") + label + ")", m.residual);
}

void require_selfadjoint(const AOperator& op, const char* label) {
  const double r = a_selfadjoint_residual(op.context(), op.matrix());
  if (r > kStructureTol) precondition_failure(std::string("is_a_selfadjoint(") + label + ")", r);
}

// Operators built inside a chain (products, sums) are in B_A by closure;
// the membership is still checked.
AOperator derived(const ContextPtr& ctx, ComplexMatrix m, const char* label) {
  AOperator op(ctx, std::move(m));
  require_in_B_A(op, label);
  return op;
}

double seminorm_of(const ContextPtr& ctx, const ComplexMatrix& m, const char* label) {
  return derived(ctx, m, label).seminorm();
}

// Checks T in B_A on the raw input, then keeps only its A-visible part P T P.
// For T in B_A we have P T = P T P and A T = A P T P, so every quantity built
// from sums, products and A-adjoints is unchanged, while products no longer
// drag along the N(A) block, whose powers can swamp the R(A) block in rounding.
AOperator operand(const ContextPtr& ctx, const ComplexMatrix& m, const char* label) {
  const AOperator raw(ctx, m);
  require_in_B_A(raw, label);
  const ComplexMatrix& p = ctx->range_projector();
  return AOperator(ctx, p * m * p);
}

const ComplexMatrix& require_second(const std::optional<ComplexMatrix>& s, std::string_view id) {
  if (!s) {
    throw Error(ErrorCode::precondition,
                "precondition failed: " + std::string(id) + " needs a second operator S");
  }
  return *s;
}

void finalize(InequalityChainReport& r, double tol) {
  r.margins.clear();
  r.passed = true;
  r.slack_used = 0.0;
  for (std::size_t i = 0; i + 1 < r.terms.size(); ++i) {
    const double m = r.terms[i + 1].value - r.terms[i].value;
    r.margins.push_back(m);
    if (!(m >= -allowed_slack(r.terms[i + 1].value, tol))) r.passed = false;
    if (m < 0.0) r.slack_used = std::max(r.slack_used, -m);
  }
}

// K = ||T# T + T T#||_A
double kittaneh_k(const AOperator& t) {
  const ComplexMatrix& adj = t.adjoint();
  return seminorm_of(t.context_ptr(), adj * t.matrix() + t.matrix() * adj, "T#T + TT#");
}

IdentityClause equality_clause(std::string name, double lhs, double rhs, double tol) {
  const double dev = rel_diff(lhs, rhs);
  return {std::move(name), lhs, rhs, dev, tol, dev <= tol};
}

IdentityClause inequality_clause(std::string name, double lhs, double rhs, double tol) {
  const double dev = (lhs - rhs) / (1.0 + std::max(1.0, std::abs(rhs)));
  return {std::move(name), lhs, rhs, dev, tol, dev <= tol};
}

void finalize(IdentityReport& r) {
  r.passed = true;
  r.relative_deviation = 0.0;
  for (const auto& c : r.clauses) {
    r.passed = r.passed && c.passed;
    r.relative_deviation = std::max(r.relative_deviation, c.deviation);
  }
}

}  // namespace

std::string_view to_string(ChainId id) {
  for (const auto& e : kChainNames)
    if (e.id == id) return e.name;
  return "C_UNKNOWN";
}

std::string_view to_string(IdentityId id) {
  for (const auto& e : kIdentityNames)
    if (e.id == id) return e.name;
  return "E_UNKNOWN";
}

std::optional<ChainId> parse_chain_id(std::string_view name) {
  for (const auto& e : kChainNames)
    if (e.name == name) return e.id;
  return std::nullopt;
}

std::optional<IdentityId> parse_identity_id(std::string_view name) {
  for (const auto& e : kIdentityNames)
    if (e.name == name) return e.id;
  return std::nullopt;
}

bool needs_second_operator(ChainId id) {
  switch (id) {
    case ChainId::lem_sq:
    case ChainId::integral:
    case ChainId::refan:
    case ChainId::drog0:
    case ChainId::moradi:
      return true;
    default:
      return false;
  }
}

bool takes_sign(ChainId id) { return id == ChainId::refan || id == ChainId::drog0; }

bool needs_second_operator(IdentityId id) {
  return id == IdentityId::commut || id == IdentityId::block || id == IdentityId::submult;
}

bool requires_selfadjoint(ChainId id) { return id == ChainId::lem_sq; }

bool requires_selfadjoint(IdentityId id) {
  return id == IdentityId::s1 || id == IdentityId::block;
}

double allowed_slack(double b, double tol) { return tol * (1.0 + std::max(1.0, std::abs(b))); }

double InequalityChainReport::min_margin() const {
  return margins.empty() ? 0.0 : *std::min_element(margins.begin(), margins.end());
}

double IdentityReport::margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : clauses) m = std::min(m, c.tolerance - c.deviation);
  return m;
}

double gamma(const AOperator& t) {
  const ContextPtr& ctx = t.context_ptr();
  const double re = seminorm_of(ctx, t.re(), "Re_A(T)");
  const double im = seminorm_of(ctx, t.im(), "Im_A(T)");
  const double mixed = seminorm_of(ctx, t.re() * t.im(), "Re_A(T) Im_A(T)");
  const double d = re * re - im * im;
  return std::sqrt(d * d + 4.0 * mixed * mixed);
}

double gamma(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  AOperator op(std::make_shared<const SemiHilbertContext>(ctx), t);
  require_in_B_A(op, "T");
  return gamma(op);
}

QuadratureResult integral_mean_norm(const SemiHilbertContext& ctx, const ComplexMatrix& x,
                                    const ComplexMatrix& m) {
  // compress() is linear, so the integrand is the plain norm of a pencil.
  const ComplexMatrix xc = compress(ctx, x);
  const ComplexMatrix mc = compress(ctx, m);
  auto f = [&](double lambda) { return operator_norm(lambda * xc + (1.0 - lambda) * mc); };

  constexpr int kStartPanels = 8;
  constexpr int kMaxPanels = 1 << 14;
  constexpr double kTol = 1e-9;

  int panels = kStartPanels;
  const double ends = f(0.0) + f(1.0);
  double evens = 0.0;
  double odds = 0.0;
  for (int k = 1; k < panels; ++k) {
    const double v = f(static_cast<double>(k) / panels);
    (k % 2 == 0 ? evens : odds) += v;
  }
  double estimate = (ends + 4.0 * odds + 2.0 * evens) / (3.0 * panels);

  while (panels < kMaxPanels) {
    const int next = panels * 2;
    evens += odds;
    odds = 0.0;
    for (int k = 1; k < next; k += 2) odds += f(static_cast<double>(k) / next);
    const double refined = (ends + 4.0 * odds + 2.0 * evens) / (3.0 * next);
    panels = next;
    const bool done = std::abs(refined - estimate) <= kTol * (1.0 + std::abs(refined));
    estimate = refined;
    if (done) return {estimate, panels, true};
  }
  return {estimate, panels, false};
}

InequalityChainReport evaluate_chain(ChainId id, const ContextPtr& ctx, const ComplexMatrix& t_in,
                                     const std::optional<ComplexMatrix>& s_in, Sign sign) {
  if (!ctx) throw Error(ErrorCode::context, "evaluate_chain: missing context");
  InequalityChainReport r{id, takes_sign(id) ? std::optional<Sign>(sign) : std::nullopt, {}, {},
                          false, 0.0, false};

  const AOperator t = operand(ctx, t_in, "T");
  std::optional<AOperator> s;
  if (needs_second_operator(id)) s.emplace(operand(ctx, require_second(s_in, to_string(id)), "S"));
  const double sqrt_half = std::numbers::sqrt2 / 2.0;

  switch (id) {
    case ChainId::refine1: {
      const double n = t.seminorm();
      r.terms = {{"half_norm", 0.5 * n}, {"omega", t.numerical_radius()}, {"norm", n}};
      break;
    }
    case ChainId::kit: {
      const double k = kittaneh_k(t);
      r.terms = {{"half_sqrt_K", 0.5 * std::sqrt(k)},
                 {"omega", t.numerical_radius()},
                 {"sqrt2_half_sqrt_K", sqrt_half * std::sqrt(k)}};
      break;
    }
    case ChainId::thm1: {
      const double k = kittaneh_k(t);
      const double re = seminorm_of(ctx, t.re(), "Re_A(T)");
      const double im = seminorm_of(ctx, t.im(), "Im_A(T)");
      r.terms = {{"half_sqrt_K", 0.5 * std::sqrt(k)},
                 {"sqrt2_half_sqrt_re2_plus_im2", sqrt_half * std::sqrt(re * re + im * im)},
                 {"omega", t.numerical_radius()}};
      break;
    }
    case ChainId::lem_sq: {
      require_selfadjoint(t, "T");
      require_selfadjoint(*s, "S");
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& sm = s->matrix();
      const double t2 = seminorm_of(ctx, tm * tm, "T^2");
      const double s2 = seminorm_of(ctx, sm * sm, "S^2");
      const double ts = seminorm_of(ctx, tm * sm, "TS");
      r.terms = {{"norm_T2_plus_S2", seminorm_of(ctx, tm * tm + sm * sm, "T^2 + S^2")},
                 {"sym2x2_bound", sym2x2_spectral_radius(t2, ts, s2)}};
      break;
    }
    case ChainId::thn: {
      const double k = kittaneh_k(t);
      const double w = t.numerical_radius();
      r.terms = {{"quarter_K", 0.25 * k},
                 {"quarter_2omega2_plus_gamma", 0.25 * (2.0 * w * w + gamma(t))},
                 {"omega_sq", w * w}};
      break;
    }
    case ChainId::integral: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& sm = s->matrix();
      const ComplexMatrix mid = 0.5 * (tm + sm);
      const auto i1 = integral_mean_norm(*ctx, tm, mid);
      const auto i2 = integral_mean_norm(*ctx, sm, mid);
      r.quadrature_warning = !i1.converged || !i2.converged;
      r.terms = {{"norm_T_plus_S", seminorm_of(ctx, tm + sm, "T + S")},
                 {"I1_plus_I2", i1.value + i2.value},
                 {"norm_T_plus_norm_S", t.seminorm() + s->seminorm()}};
      break;
    }
    case ChainId::thm3: {
      const double k = kittaneh_k(t);
      const double w = t.numerical_radius();
      const ComplexMatrix re2 = t.re() * t.re();
      const ComplexMatrix im2 = t.im() * t.im();
      const ComplexMatrix mid = 0.5 * (re2 + im2);
      const auto j1 = integral_mean_norm(*ctx, re2, mid);
      const auto j2 = integral_mean_norm(*ctx, im2, mid);
      r.quadrature_warning = !j1.converged || !j2.converged;
      r.terms = {{"quarter_K", 0.25 * k},
                 {"half_J1_plus_half_J2", 0.5 * j1.value + 0.5 * j2.value},
                 {"omega_sq", w * w}};
      break;
    }
    case ChainId::refan: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& sm = s->matrix();
      const ComplexMatrix& ta = t.adjoint();
      const ComplexMatrix& sa = s->adjoint();
      const ComplexMatrix combo = sign == Sign::plus ? tm + sm : tm - sm;
      const double diag = seminorm_of(ctx, ta * tm + sa * sm, "T#T + S#S");
      const double cross = seminorm_of(ctx, ta * sm + sa * tm, "T#S + S#T");
      r.terms = {{"norm_T_pm_S", seminorm_of(ctx, combo, "T +- S")},
                 {"sqrt_refan_middle", std::sqrt(diag + cross)},
                 {"norm_T_plus_norm_S", t.seminorm() + s->seminorm()}};
      break;
    }
    case ChainId::corf: {
      const double k = kittaneh_k(t);
      const double w = t.numerical_radius();
      const ComplexMatrix prod = (t.im() * t.im()) * (t.re() * t.re());
      const double p = seminorm_of(ctx, prod, "Im^2 Re^2");
      r.terms = {{"quarter_K", 0.25 * k},
                 {"sqrt2_half_sqrt_omega4_plus_norm", sqrt_half * std::sqrt(w * w * w * w + p)},
                 {"omega_sq", w * w}};
      break;
    }
    case ChainId::drog0: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& sm = s->matrix();
      const ComplexMatrix combo = sign == Sign::plus ? tm + sm : tm - sm;
      const double gram = seminorm_of(ctx, tm * t.adjoint() + sm * s->adjoint(), "TT# + SS#");
      const double w = derived(ctx, tm * s->adjoint(), "TS#").numerical_radius();
      r.terms = {{"norm_T_pm_S", seminorm_of(ctx, combo, "T +- S")},
                 {"sqrt_drog0_middle", std::sqrt(gram + 2.0 * w)},
                 {"norm_T_plus_norm_S", t.seminorm() + s->seminorm()}};
      break;
    }
    case ChainId::thm2: {
      const double k = kittaneh_k(t);
      const double w = t.numerical_radius();
      const ComplexMatrix prod = (t.im() * t.im()) * (t.re() * t.re());
      const double wp = derived(ctx, prod, "Im^2 Re^2").numerical_radius();
      r.terms = {{"quarter_K", 0.25 * k},
                 {"sqrt2_half_sqrt_omega4_plus_omega", sqrt_half * std::sqrt(w * w * w * w + wp)},
                 {"omega_sq", w * w}};
      break;
    }
    case ChainId::moradi: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& sm = s->matrix();
      const double nt = t.seminorm();
      const double ns = s->seminorm();
      const double cross = seminorm_of(ctx, tm * s->adjoint(), "TS#");
      const double w = derived(ctx, s->adjoint() * tm, "S#T").numerical_radius();
      const double a = nt * nt;
      const double c = ns * ns;
      const double inner_term = 0.5 * (a + c + std::sqrt((a - c) * (a - c) + 4.0 * cross * cross));
      r.terms = {{"norm_T_plus_S", seminorm_of(ctx, tm + sm, "T + S")},
                 {"sqrt_moradi_middle", std::sqrt(inner_term + 2.0 * w)},
                 {"norm_T_plus_norm_S", nt + ns}};
      break;
    }
  }
  finalize(r, ctx->cmp_tol());
  return r;
}

IdentityReport check_identity(IdentityId id, const ContextPtr& ctx, const ComplexMatrix& t_in,
                              const std::optional<ComplexMatrix>& s_in, std::optional<int> n) {
  if (!ctx) throw Error(ErrorCode::context, "check_identity: missing context");
  IdentityReport r{id, {}, 0.0, false};
  const AOperator t = operand(ctx, t_in, "T");
  std::optional<AOperator> s;
  if (needs_second_operator(id)) s.emplace(operand(ctx, require_second(s_in, to_string(id)), "S"));
  if (requires_selfadjoint(id)) {
    require_selfadjoint(t, "T");
    if (s) require_selfadjoint(*s, "S");
  }
  if (n && *n < 1) throw Error(ErrorCode::invalid_input, "check_identity: n must be >= 1");

  switch (id) {
    case IdentityId::diez: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& ta = t.adjoint();
      const double nt = t.seminorm();
      const double ref = nt * nt;
      const double v1 = seminorm_of(ctx, ta * tm, "T#T");
      const double v2 = seminorm_of(ctx, tm * ta, "TT#");
      const double na = seminorm_of(ctx, ta, "T#");
      const double v3 = na * na;
      r.clauses.push_back(equality_clause("||T#T||_A = ||T||_A^2", v1, ref, kEqualityTol));
      r.clauses.push_back(equality_clause("||TT#||_A = ||T||_A^2", v2, ref, kEqualityTol));
      r.clauses.push_back(equality_clause("||T#||_A^2 = ||T||_A^2", v3, ref, kEqualityTol));
      const double lo = std::min({v1, v2, v3, ref});
      const double hi = std::max({v1, v2, v3, ref});
      r.clauses.push_back(equality_clause("pairwise spread", lo, hi, kEqualityTol));
      break;
    }
    case IdentityId::commut: {
      const double ts = derived(ctx, t.matrix() * s->matrix(), "TS").spectral_radius();
      const double st = derived(ctx, s->matrix() * t.matrix(), "ST").spectral_radius();
      r.clauses.push_back(equality_clause("r_A(TS) = r_A(ST)", ts, st, kGelfandTol));
      break;
    }
    case IdentityId::s1: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& ta = t.adjoint();
      const AOperator adj = derived(ctx, ta, "T#");
      const double sa_res = a_selfadjoint_residual(*ctx, ta);
      r.clauses.push_back({"(i) T# is A-selfadjoint", sa_res, 0.0, sa_res, kMatrixIdentityTol,
                           sa_res <= kMatrixIdentityTol});
      const ComplexMatrix& adj2 = adj.adjoint();
      const double inv_res = (adj2 - ta).frobenius_norm() / (1.0 + ta.frobenius_norm());
      r.clauses.push_back({"(i) (T#)# = T#", inv_res, 0.0, inv_res, kMatrixIdentityTol,
                           inv_res <= kMatrixIdentityTol});

      const double nt = t.seminorm();
      const double w = t.numerical_radius();
      const double rad = t.spectral_radius();
      const double dw = std::abs(nt - w);
      const double dr = std::abs(nt - rad);
      r.clauses.push_back({"(ii) ||T||_A = omega_A(T)", nt, w, dw, kEqualityTol, dw <= kEqualityTol});
      r.clauses.push_back({"(ii) ||T||_A = r_A(T)", nt, rad, dr, kGelfandTol, dr <= kGelfandTol});

      std::vector<int> powers = n ? std::vector<int>{*n} : std::vector<int>{2, 3, 4, 5};
      for (int k : powers) {
        const double lhs = seminorm_of(ctx, power(tm, k), "T^n");
        r.clauses.push_back(equality_clause("(iii) ||T^" + std::to_string(k) + "||_A = ||T||_A^" +
                                                std::to_string(k),
                                            lhs, std::pow(nt, k), kPowerTol));
      }
      std::vector<int> evens = n ? std::vector<int>{*n} : std::vector<int>{1, 2};
      for (int k : evens) {
        const ComplexMatrix at = ctx->weight() * power(tm, 2 * k);
        const ComplexMatrix herm = 0.5 * (at + at.adjoint());
        const double lmin = hermitian_eigenvalues(herm).back();
        const double dev = std::max(0.0, -lmin) / (1.0 + operator_norm(at));
        r.clauses.push_back({"(vi) T^" + std::to_string(2 * k) + " is A-positive", lmin, 0.0, dev,
                             kMatrixIdentityTol, dev <= kMatrixIdentityTol});
      }
      break;
    }
    case IdentityId::sharpp: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& ta = t.adjoint();
      const ComplexMatrix lhs = 0.5 * derived(ctx, tm * ta + ta * tm, "TT# + T#T").adjoint();
      const ComplexMatrix re_adj = derived(ctx, t.re(), "Re_A(T)").adjoint();
      const ComplexMatrix im_adj = derived(ctx, t.im(), "Im_A(T)").adjoint();
      const ComplexMatrix rhs = re_adj * re_adj + im_adj * im_adj;
      const double tn = operator_norm(tm);
      const double dev = (lhs - rhs).frobenius_norm() / (1.0 + tn * tn);
      r.clauses.push_back({"(TT# + T#T)#/2 = (Re#)^2 + (Im#)^2", lhs.frobenius_norm(),
                           rhs.frobenius_norm(), dev, kMatrixIdentityTol,
                           dev <= kMatrixIdentityTol});
      break;
    }
    case IdentityId::block: {
      const ComplexMatrix& tm = t.matrix();
      const ComplexMatrix& sm = s->matrix();
      const ContextPtr big = share(block_diag_context(*ctx));
      const ComplexMatrix t2 = tm * tm;
      const ComplexMatrix s2 = sm * sm;
      const ComplexMatrix ts = tm * sm;
      const ComplexMatrix st = sm * tm;
      const double r_block = derived(big, block2x2(t2, ts, st, s2), "[[T^2,TS],[ST,S^2]]")
                                 .spectral_radius();
      const double n_t2 = seminorm_of(ctx, t2, "T^2");
      const double n_s2 = seminorm_of(ctx, s2, "S^2");
      const double n_ts = seminorm_of(ctx, ts, "TS");
      const double n_st = seminorm_of(ctx, st, "ST");
      const double r_sum = derived(ctx, t2 + s2, "T^2 + S^2").spectral_radius();
      r.clauses.push_back(inequality_clause("r_AA(block) <= r(norm matrix)", r_block,
                                            sym2x2_spectral_radius(n_t2, n_ts, n_s2),
                                            ctx->cmp_tol()));
      r.clauses.push_back(
          equality_clause("r_A(T^2 + S^2) = r_AA(block)", r_sum, r_block, kGelfandTol));
      r.clauses.push_back(equality_clause("||TS||_A = ||ST||_A", n_ts, n_st, kEqualityTol));
      break;
    }
    case IdentityId::submult: {
      const double lhs = seminorm_of(ctx, t.matrix() * s->matrix(), "TS");
      r.clauses.push_back(inequality_clause("||TS||_A <= ||T||_A ||S||_A", lhs,
                                            t.seminorm() * s->seminorm(), ctx->cmp_tol()));
      break;
    }
  }
  finalize(r);
  return r;
}

}  // namespace anumrad
