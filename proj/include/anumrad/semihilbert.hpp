#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "anumrad/matkernel.hpp"
#include "anumrad/matrix.hpp"

namespace anumrad {

inline constexpr double kDefaultCmpTol = 1e-8;
/// Relative tolerance for the A-selfadjoint / A-positive structure tests.
inline constexpr double kStructureTol = 1e-9;

/// Default inequality slack; the ANUMRAD_CMP_TOL environment variable
/// overrides kDefaultCmpTol when set to a finite non-negative number.
double default_cmp_tol();

/// A validated positive semidefinite weight A and the objects derived from it.
/// Immutable after construction.
class SemiHilbertContext {
 public:
  const ComplexMatrix& weight() const noexcept { return a_; }
  const ComplexMatrix& sqrt_weight() const noexcept { return sqrt_a_; }
  const ComplexMatrix& pinv_sqrt_weight() const noexcept { return pinv_sqrt_a_; }
  const ComplexMatrix& pinv_weight() const noexcept { return pinv_a_; }
  /// Orthogonal projector onto R(A).
  const ComplexMatrix& range_projector() const noexcept { return p_; }
  const HermitianEig& spectrum() const noexcept { return eig_; }

  std::size_t dim() const noexcept { return a_.rows(); }
  std::size_t rank() const noexcept { return rank_; }
  double rank_tol() const noexcept { return rank_tol_; }
  double cmp_tol() const noexcept { return cmp_tol_; }

 private:
  friend SemiHilbertContext make_context(const ComplexMatrix&, double, double);
  SemiHilbertContext(ComplexMatrix a, ComplexMatrix sqrt_a, ComplexMatrix pinv_sqrt_a,
                     ComplexMatrix pinv_a, ComplexMatrix p, HermitianEig eig, std::size_t rank,
                     double rank_tol, double cmp_tol);

  ComplexMatrix a_;
  ComplexMatrix sqrt_a_;
  ComplexMatrix pinv_sqrt_a_;
  ComplexMatrix pinv_a_;
  ComplexMatrix p_;
  HermitianEig eig_;
  std::size_t rank_;
  double rank_tol_;
  double cmp_tol_;
};

using ContextPtr = std::shared_ptr<const SemiHilbertContext>;

/// Builds a context from A. Throws zero_weight for A = 0 and not_psd when A
/// has a negative eigenvalue beyond rank_tol.
SemiHilbertContext make_context(const ComplexMatrix& a, double rank_tol = kDefaultRankTol,
                                double cmp_tol = default_cmp_tol());

inline ContextPtr share(SemiHilbertContext ctx) {
  return std::make_shared<const SemiHilbertContext>(std::move(ctx));
}

/// <x, y>_A = <Ax, y>, linear in x.
cplx a_inner(const SemiHilbertContext& ctx, std::span<const cplx> x, std::span<const cplx> y);
double a_norm_vec(const SemiHilbertContext& ctx, std::span<const cplx> x);

struct Membership {
  bool holds;
  /// Relative Frobenius residual of the defining condition.
  double residual;
};

/// T in B_A(H): R(T*A) inside R(A), tested as ||(I - P) T* A||_F.
Membership in_B_A(const SemiHilbertContext& ctx, const ComplexMatrix& t);
/// T in B_{A^{1/2}}(H): T maps N(A) into N(A^{1/2}), tested as ||A^{1/2} T (I - P)||_F.
/// Coincides with in_B_A in finite dimension.
Membership in_B_A_half(const SemiHilbertContext& ctx, const ComplexMatrix& t);

/// Reduced solution A^+ T* A of AX = T*A. Throws not_adjointable.
ComplexMatrix a_adjoint(const SemiHilbertContext& ctx, const ComplexMatrix& t);
ComplexMatrix re_a(const SemiHilbertContext& ctx, const ComplexMatrix& t);
ComplexMatrix im_a(const SemiHilbertContext& ctx, const ComplexMatrix& t);

/// Relative residual ||AT - T*A||_F / (1 + ||AT||_F).
double a_selfadjoint_residual(const SemiHilbertContext& ctx, const ComplexMatrix& t);
bool is_a_selfadjoint(const SemiHilbertContext& ctx, const ComplexMatrix& t,
                      double tol = kStructureTol);
bool is_a_positive(const SemiHilbertContext& ctx, const ComplexMatrix& t,
                   double tol = kStructureTol);

/// A^{1/2} T (A^{1/2})^+. Throws not_bounded when T is not in B_{A^{1/2}}.
ComplexMatrix compress(const SemiHilbertContext& ctx, const ComplexMatrix& t);

double a_op_seminorm(const SemiHilbertContext& ctx, const ComplexMatrix& t);
double a_numerical_radius(const SemiHilbertContext& ctx, const ComplexMatrix& t);
double a_spectral_radius(const SemiHilbertContext& ctx, const ComplexMatrix& t);

/// Context for diag(A, A) on H (+) H.
SemiHilbertContext block_diag_context(const SemiHilbertContext& ctx);
ComplexMatrix block2x2(const ComplexMatrix& t11, const ComplexMatrix& t12,
                       const ComplexMatrix& t21, const ComplexMatrix& t22);

/// An operator bound to a context, with write-once caches for the derived
/// quantities. Copies share the cache; concurrent first use is safe.
class AOperator {
 public:
  AOperator(ContextPtr ctx, ComplexMatrix t);

  const ComplexMatrix& matrix() const noexcept { return t_; }
  const SemiHilbertContext& context() const noexcept { return *ctx_; }
  const ContextPtr& context_ptr() const noexcept { return ctx_; }

  const Membership& membership() const;
  /// Throws not_adjointable if membership fails.
  const ComplexMatrix& adjoint() const;
  const ComplexMatrix& re() const;
  const ComplexMatrix& im() const;
  const ComplexMatrix& compressed() const;
  double seminorm() const;
  double numerical_radius() const;
  double spectral_radius() const;

 private:
  struct Cache;
  ContextPtr ctx_;
  ComplexMatrix t_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace anumrad
