#pragma once

#include <functional>
#include <vector>

#include "anumrad/matrix.hpp"

namespace anumrad {

inline constexpr double kDefaultRankTol = 1e-10;

/// Eigenpairs of a Hermitian matrix: eigenvalues sorted descending, columns
/// of `eigenvectors` orthonormal and aligned with them.
struct HermitianEig {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Cyclic Jacobi eigensolver. The input is symmetrized as (M + M*)/2 after
/// checking it is Hermitian to 1e-10 relative.
HermitianEig hermitian_eigendecomposition(const ComplexMatrix& m);

/// Eigenvalues only (descending); skips eigenvector accumulation.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Largest eigenvalue of a Hermitian matrix, without input validation.
/// Hot path of the numerical-radius sweep.
double hermitian_lambda_max(const ComplexMatrix& m);

ComplexMatrix moore_penrose_pinv(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);
ComplexMatrix range_projector(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);

/// Spectral decomposition of a PSD matrix with the rank decision applied.
/// Throws not_psd when an eigenvalue falls below -rank_tol * max|lambda|.
struct PsdSpectrum {
  HermitianEig eig;
  std::size_t rank = 0;
  double lambda_max = 0.0;
};
PsdSpectrum psd_spectrum(const ComplexMatrix& m, double rank_tol);

double operator_norm(const ComplexMatrix& m);

struct NumericalRadiusOptions {
  int angles = 720;
  double angle_width = 1e-12;
};

/// omega(M) = max over theta of lambda_max((e^{i theta} M + e^{-i theta} M*)/2),
/// via a uniform angle grid and golden-section refinement of every grid
/// maximum that the Lipschitz bound cannot rule out.
double numerical_radius(const ComplexMatrix& m, const NumericalRadiusOptions& opts = {});

/// Spectral radius by the Gelfand formula with normalized repeated squaring.
double spectral_radius_gelfand(const ComplexMatrix& m);

/// Spectral radius of the symmetric matrix [[a, b], [b, c]] with a, c >= 0.
double sym2x2_spectral_radius(double a, double b, double c);

struct GoldenResult {
  double x;
  double fx;
};

/// Golden-section maximization of a unimodal f on [lo, hi] down to an
/// interval of width `width`. Returns the best point evaluated.
GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                     double hi, double width, int max_iterations = 200);

}  // namespace anumrad
