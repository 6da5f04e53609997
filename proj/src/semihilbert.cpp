#include "anumrad/semihilbert.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "anumrad/error.hpp"

namespace anumrad {

double default_cmp_tol() {
  if (const char* env = std::getenv("ANUMRAD_CMP_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v >= 0.0) return v;
  }
  return kDefaultCmpTol;
}

SemiHilbertContext::SemiHilbertContext(ComplexMatrix a, ComplexMatrix sqrt_a,
                                       ComplexMatrix pinv_sqrt_a, ComplexMatrix pinv_a,
                                       ComplexMatrix p, HermitianEig eig, std::size_t rank,
                                       double rank_tol, double cmp_tol)
    : a_(std::move(a)),
      sqrt_a_(std::move(sqrt_a)),
      pinv_sqrt_a_(std::move(pinv_sqrt_a)),
      pinv_a_(std::move(pinv_a)),
      p_(std::move(p)),
      eig_(std::move(eig)),
      rank_(rank),
      rank_tol_(rank_tol),
      cmp_tol_(cmp_tol) {}

SemiHilbertContext make_context(const ComplexMatrix& a, double rank_tol, double cmp_tol) {
  if (!a.is_square()) throw Error(ErrorCode::dimension, "weight must be square");
  if (!(cmp_tol >= 0.0) || !std::isfinite(cmp_tol)) {
    throw Error(ErrorCode::invalid_input, "cmp_tol must be a finite non-negative number");
  }
  if (a.frobenius_norm() == 0.0) {
    throw Error(ErrorCode::zero_weight, "weight A must be a nonzero positive operator");
  }
  PsdSpectrum s = psd_spectrum(a, rank_tol);
  if (s.rank == 0) throw Error(ErrorCode::zero_weight, "weight A is numerically zero");

  const std::size_t n = a.rows();
  const auto& v = s.eig.eigenvectors;
  const auto& lam = s.eig.eigenvalues;
  ComplexMatrix sqrt_a(n, n), pinv_sqrt_a(n, n), pinv_a(n, n), p(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = std::max(lam[k], 0.0);
    const bool kept = k < s.rank;
    // Eigenvalues below the rank cut are treated as exact zeros: their roots
    // (~1e-8 for 1e-16 noise) would otherwise leak into A^{1/2} (I - P).
    const double root = kept ? std::sqrt(l) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const cplx vv = v(i, k) * std::conj(v(j, k));
        sqrt_a(i, j) += root * vv;
        if (kept) {
          pinv_sqrt_a(i, j) += vv / root;
          pinv_a(i, j) += vv / l;
          p(i, j) += vv;
        }
      }
    }
  }
  // The symmetrized A is kept so that A is exactly Hermitian downstream.
  ComplexMatrix herm = 0.5 * (a + a.adjoint());
  return SemiHilbertContext(std::move(herm), std::move(sqrt_a), std::move(pinv_sqrt_a),
                            std::move(pinv_a), std::move(p), std::move(s.eig), s.rank, rank_tol,
                            cmp_tol);
}

cplx a_inner(const SemiHilbertContext& ctx, std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != ctx.dim() || y.size() != ctx.dim()) {
    throw Error(ErrorCode::dimension, "a_inner: vector length does not match the weight");
  }
  const CVector ax = ctx.weight() * x;
  return inner(ax, y);
}

double a_norm_vec(const SemiHilbertContext& ctx, std::span<const cplx> x) {
  return std::sqrt(std::max(a_inner(ctx, x, x).real(), 0.0));
}

namespace {

void require_operator(const SemiHilbertContext& ctx, const ComplexMatrix& t, const char* op) {
  if (!t.is_square() || t.rows() != ctx.dim()) {
    throw Error(ErrorCode::dimension, std::string(op) + ": operator must be " +
                                          std::to_string(ctx.dim()) + "x" +
                                          std::to_string(ctx.dim()));
  }
}

ComplexMatrix complement(const ComplexMatrix& p) {
  return ComplexMatrix::identity(p.rows()) - p;
}

}  // namespace

Membership in_B_A(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  require_operator(ctx, t, "in_B_A");
  const ComplexMatrix tsa = t.adjoint() * ctx.weight();
  const double residual =
      (complement(ctx.range_projector()) * tsa).frobenius_norm() / (1.0 + tsa.frobenius_norm());
  return {residual <= ctx.rank_tol(), residual};
}

Membership in_B_A_half(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  require_operator(ctx, t, "in_B_A_half");
  const ComplexMatrix st = ctx.sqrt_weight() * t;
  const double residual =
      (st * complement(ctx.range_projector())).frobenius_norm() / (1.0 + st.frobenius_norm());
  return {residual <= ctx.rank_tol(), residual};
}

ComplexMatrix a_adjoint(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  const Membership m = in_B_A(ctx, t);
  if (!m.holds) {
    throw Error(ErrorCode::not_adjointable,
                "operator is not A-adjointable (residual " + std::to_string(m.residual) + ")",
                m.residual);
  }
  return ctx.pinv_weight() * (t.adjoint() * ctx.weight());
}

ComplexMatrix re_a(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  return 0.5 * (t + a_adjoint(ctx, t));
}

ComplexMatrix im_a(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  return cplx(0.0, -0.5) * (t - a_adjoint(ctx, t));
}

double a_selfadjoint_residual(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  require_operator(ctx, t, "is_a_selfadjoint");
  const ComplexMatrix at = ctx.weight() * t;
  return (at - at.adjoint()).frobenius_norm() / (1.0 + at.frobenius_norm());
}

bool is_a_selfadjoint(const SemiHilbertContext& ctx, const ComplexMatrix& t, double tol) {
  return a_selfadjoint_residual(ctx, t) <= tol;
}

bool is_a_positive(const SemiHilbertContext& ctx, const ComplexMatrix& t, double tol) {
  if (!is_a_selfadjoint(ctx, t, tol)) return false;
  const ComplexMatrix at = ctx.weight() * t;
  const ComplexMatrix herm = 0.5 * (at + at.adjoint());
  const double lambda_min = hermitian_eigenvalues(herm).back();
  return lambda_min >= -tol * (1.0 + operator_norm(at));
}

ComplexMatrix compress(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  const Membership m = in_B_A_half(ctx, t);
  if (!m.holds) {
    throw Error(ErrorCode::not_bounded,
                "operator is not A-bounded (residual " + std::to_string(m.residual) + ")",
                m.residual);
  }
  return ctx.sqrt_weight() * t * ctx.pinv_sqrt_weight();
}

double a_op_seminorm(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  return operator_norm(compress(ctx, t));
}

double a_numerical_radius(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  return numerical_radius(compress(ctx, t));
}

double a_spectral_radius(const SemiHilbertContext& ctx, const ComplexMatrix& t) {
  return spectral_radius_gelfand(compress(ctx, t));
}

ComplexMatrix block2x2(const ComplexMatrix& t11, const ComplexMatrix& t12,
                       const ComplexMatrix& t21, const ComplexMatrix& t22) {
  const std::size_t n = t11.rows();
  for (const ComplexMatrix* b : {&t11, &t12, &t21, &t22}) {
    if (b->rows() != n || b->cols() != n) {
      throw Error(ErrorCode::dimension, "block2x2: blocks must be square of equal size");
    }
  }
  ComplexMatrix out(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = t11(i, j);
      out(i, j + n) = t12(i, j);
      out(i + n, j) = t21(i, j);
      out(i + n, j + n) = t22(i, j);
    }
  }
  return out;
}

SemiHilbertContext block_diag_context(const SemiHilbertContext& ctx) {
  const ComplexMatrix zero(ctx.dim(), ctx.dim());
  return make_context(block2x2(ctx.weight(), zero, zero, ctx.weight()), ctx.rank_tol(),
                      ctx.cmp_tol());
}

struct AOperator::Cache {
  std::once_flag membership_once, adjoint_once, parts_once, compressed_once;
  std::once_flag norm_once, omega_once, radius_once;
  std::optional<Membership> membership;
  std::optional<ComplexMatrix> adjoint, re, im, compressed;
  double norm = 0.0, omega = 0.0, radius = 0.0;
};

AOperator::AOperator(ContextPtr ctx, ComplexMatrix t)
    : ctx_(std::move(ctx)), t_(std::move(t)), cache_(std::make_shared<Cache>()) {
  if (!ctx_) throw Error(ErrorCode::context, "AOperator requires a context");
  require_operator(*ctx_, t_, "AOperator");
}

const Membership& AOperator::membership() const {
  std::call_once(cache_->membership_once, [&] { cache_->membership = in_B_A(*ctx_, t_); });
  return *cache_->membership;
}

const ComplexMatrix& AOperator::adjoint() const {
  std::call_once(cache_->adjoint_once, [&] {
    const Membership& m = membership();
    if (!m.holds) {
      throw Error(ErrorCode::not_adjointable,
                  "operator is not A-adjointable (residual " + std::to_string(m.residual) + ")",
                  m.residual);
    }
    cache_->adjoint = ctx_->pinv_weight() * (t_.adjoint() * ctx_->weight());
  });
  return *cache_->adjoint;
}

const ComplexMatrix& AOperator::re() const {
  std::call_once(cache_->parts_once, [&] {
    const ComplexMatrix& s = adjoint();
    cache_->re = 0.5 * (t_ + s);
    cache_->im = cplx(0.0, -0.5) * (t_ - s);
  });
  return *cache_->re;
}

const ComplexMatrix& AOperator::im() const {
  re();
  return *cache_->im;
}

const ComplexMatrix& AOperator::compressed() const {
  std::call_once(cache_->compressed_once, [&] { cache_->compressed = compress(*ctx_, t_); });
  return *cache_->compressed;
}

double AOperator::seminorm() const {
  std::call_once(cache_->norm_once, [&] { cache_->norm = operator_norm(compressed()); });
  return cache_->norm;
}

double AOperator::numerical_radius() const {
  std::call_once(cache_->omega_once,
                 [&] { cache_->omega = anumrad::numerical_radius(compressed()); });
  return cache_->omega;
}

double AOperator::spectral_radius() const {
  std::call_once(cache_->radius_once,
                 [&] { cache_->radius = spectral_radius_gelfand(compressed()); });
  return cache_->radius;
}

}  // namespace anumrad
