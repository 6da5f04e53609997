#include "anumrad/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "anumrad/error.hpp"

namespace anumrad {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kOffDiagonalTol = 1e-14;
constexpr double kHermitianTol = 1e-10;

void require_square(const ComplexMatrix& m, const char* op) {
  if (!m.is_square()) {
    throw Error(ErrorCode::dimension, std::string(op) + ": matrix must be square, got " +
                                          std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

void require_finite(const ComplexMatrix& m, const char* op) {
  if (!m.all_finite()) {
    throw Error(ErrorCode::invalid_input, std::string(op) + ": non-finite entries");
  }
}

// Validates Hermitian structure and returns (M + M*)/2.
ComplexMatrix symmetrized(const ComplexMatrix& m, const char* op) {
  require_square(m, op);
  require_finite(m, op);
  const std::size_t n = m.rows();
  ComplexMatrix h(n, n);
  double dev2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx a = m(i, j);
      const cplx b = std::conj(m(j, i));
      dev2 += std::norm(a - b);
      h(i, j) = 0.5 * (a + b);
    }
  }
  if (std::sqrt(dev2) > kHermitianTol * (1.0 + m.frobenius_norm())) {
    throw Error(ErrorCode::invalid_input, std::string(op) + ": matrix is not Hermitian");
  }
  return h;
}

// In-place cyclic Jacobi on a Hermitian n x n buffer. On return the diagonal
// holds the eigenvalues; if `v` is non-null it accumulates the rotations.
void jacobi_hermitian(cplx* a, std::size_t n, cplx* v) {
  double total = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) total += std::norm(a[k]);
  const double target = kOffDiagonalTol * std::sqrt(total);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
    off = std::sqrt(2.0 * off);
    if (off <= target) return;

    // Threshold sweeps: early on, only rotate the larger elements.
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag == 0.0 || mag < threshold) continue;
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        const cplx phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx cphase = std::conj(phase);

        // A <- A U with U_pp = c, U_pq = s, U_qp = -s e^{-i phi}, U_qq = c e^{-i phi}.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a[k * n + p];
          const cplx akq = a[k * n + q];
          a[k * n + p] = c * akp - s * cphase * akq;
          a[k * n + q] = s * akp + c * cphase * akq;
        }
        // A <- U* A.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a[p * n + k];
          const cplx aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * phase * aqk;
          a[q * n + k] = s * apk + c * phase * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();

        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = v[k * n + p];
            const cplx vkq = v[k * n + q];
            v[k * n + p] = c * vkp - s * cphase * vkq;
            v[k * n + q] = s * vkp + c * cphase * vkq;
          }
        }
      }
    }
  }
}

std::vector<double> sorted_diagonal(const ComplexMatrix& a) {
  std::vector<double> d(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) d[i] = a(i, i).real();
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

// V diag(f(lambda_i)) V*, with f applied to the kept part of the spectrum.
template <class F>
ComplexMatrix spectral_function(const HermitianEig& eig, F&& f) {
  const std::size_t n = eig.eigenvalues.size();
  const auto& v = eig.eigenvectors;
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(k, eig.eigenvalues[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = w * v(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(v(j, k));
    }
  }
  return out;
}

void require_rank_tol(double rank_tol) {
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
    throw Error(ErrorCode::invalid_input, "rank_tol must lie in (0, 1)");
  }
}

}  // namespace

HermitianEig hermitian_eigendecomposition(const ComplexMatrix& m) {
  ComplexMatrix a = symmetrized(m, "hermitian_eigendecomposition");
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi_hermitian(a.entries().data(), n, v.entries().data());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  HermitianEig out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  ComplexMatrix a = symmetrized(m, "hermitian_eigenvalues");
  jacobi_hermitian(a.entries().data(), a.rows(), nullptr);
  return sorted_diagonal(a);
}

double hermitian_lambda_max(const ComplexMatrix& m) {
  ComplexMatrix a = m;
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0).real();
  jacobi_hermitian(a.entries().data(), n, nullptr);
  double best = a(0, 0).real();
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a(i, i).real());
  return best;
}

PsdSpectrum psd_spectrum(const ComplexMatrix& m, double rank_tol) {
  require_rank_tol(rank_tol);
  PsdSpectrum out{hermitian_eigendecomposition(m), 0, 0.0};
  const auto& lam = out.eig.eigenvalues;
  const double scale = std::max(std::abs(lam.front()), std::abs(lam.back()));
  if (lam.back() < -rank_tol * scale) {
    throw Error(ErrorCode::not_psd,
                "matrix is not positive semidefinite (lambda_min = " +
                    std::to_string(lam.back()) + ")");
  }
  out.lambda_max = std::max(lam.front(), 0.0);
  for (double l : lam) {
    if (out.lambda_max > 0.0 && l > rank_tol * out.lambda_max) ++out.rank;
  }
  return out;
}

ComplexMatrix moore_penrose_pinv(const ComplexMatrix& m, double rank_tol) {
  const PsdSpectrum s = psd_spectrum(m, rank_tol);
  return spectral_function(s.eig, [&](std::size_t k, double l) {
    return k < s.rank ? 1.0 / l : 0.0;
  });
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double rank_tol) {
  const PsdSpectrum s = psd_spectrum(m, rank_tol);
  return spectral_function(s.eig, [](std::size_t, double l) { return std::sqrt(std::max(l, 0.0)); });
}

ComplexMatrix range_projector(const ComplexMatrix& m, double rank_tol) {
  const PsdSpectrum s = psd_spectrum(m, rank_tol);
  return spectral_function(s.eig, [&](std::size_t k, double) { return k < s.rank ? 1.0 : 0.0; });
}

double operator_norm(const ComplexMatrix& m) {
  require_finite(m, "operator_norm");
  // Gram matrix of the smaller side.
  const ComplexMatrix g = m.rows() >= m.cols() ? m.adjoint() * m : m * m.adjoint();
  return std::sqrt(std::max(hermitian_lambda_max(g), 0.0));
}

double numerical_radius(const ComplexMatrix& m, const NumericalRadiusOptions& opts) {
  require_square(m, "numerical_radius");
  require_finite(m, "numerical_radius");
  if (opts.angles < 3) throw Error(ErrorCode::invalid_input, "numerical_radius: too few angles");
  const std::size_t n = m.rows();
  if (n == 1) return std::abs(m(0, 0));

  const double lipschitz = operator_norm(m);
  if (lipschitz == 0.0) return 0.0;

  ComplexMatrix h(n, n);
  auto support = [&](double theta) {
    const cplx e = std::polar(0.5, theta);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = e * m(i, j) + std::conj(e * m(j, i));
    return hermitian_lambda_max(h);
  };

  const int count = opts.angles;
  const double step = 2.0 * std::numbers::pi / count;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = support(step * i);
  const double grid_best = *std::max_element(grid.begin(), grid.end());

  // Grid maxima that may still hide the global maximum; at most the eight
  // highest are refined (a flat support function needs only one).
  std::vector<int> candidates;
  for (int i = 0; i < count; ++i) {
    const double left = grid[(i + count - 1) % count];
    const double right = grid[(i + 1) % count];
    if (grid[i] >= left && grid[i] >= right && grid[i] >= grid_best - lipschitz * step) {
      candidates.push_back(i);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return grid[a] > grid[b]; });
  if (candidates.size() > 8) candidates.resize(8);

  double best = grid_best;
  for (int i : candidates) {
    const double centre = step * i;
    const auto r = golden_section_maximize(support, centre - step, centre + step, opts.angle_width);
    best = std::max(best, r.fx);
  }
  return best;
}

double spectral_radius_gelfand(const ComplexMatrix& m) {
  require_square(m, "spectral_radius_gelfand");
  require_finite(m, "spectral_radius_gelfand");
  constexpr int kMaxSquarings = 40;
  constexpr double kUnderflow = 1e-150;
  constexpr double kRelTol = 1e-10;

  // Invariant: M^(2^k) = exp(2^k * acc) * X with acc = sum_{j<k} log n_j / 2^j.
  ComplexMatrix x = m;
  double acc = 0.0;
  double weight = 1.0;
  double previous = 0.0;
  for (int k = 0; k <= kMaxSquarings; ++k) {
    const double nk = operator_norm(x);
    if (nk < kUnderflow) return 0.0;
    const double estimate = acc + std::log(nk) * weight;
    if (k > 0 && std::abs(std::expm1(estimate - previous)) < kRelTol) return std::exp(estimate);
    previous = estimate;
    acc = estimate;
    weight *= 0.5;
    x *= cplx(1.0 / nk);
    x = x * x;
  }
  return std::exp(previous);
}

double sym2x2_spectral_radius(double a, double b, double c) {
  return 0.5 * (a + c + std::sqrt((a - c) * (a - c) + 4.0 * b * b));
}

GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                     double hi, double width, int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  GoldenResult best = fc >= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
  for (int it = 0; it < max_iterations && (hi - lo) > width; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
      if (fc > best.fx) best = {c, fc};
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
      if (fd > best.fx) best = {d, fd};
    }
  }
  return best;
}

}  // namespace anumrad
