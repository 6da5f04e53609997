#include "anumrad/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "anumrad/error.hpp"

namespace anumrad {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo + 1;
  return lo + next_u64() % span;
}

cplx Rng::complex_normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

ComplexMatrix rand_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (auto& z : g.entries()) z = rng.complex_normal();
  return g;
}

ComplexMatrix rand_ginibre(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return rand_ginibre(dim, dim, rng);
}

ComplexMatrix rand_psd(std::size_t dim, std::size_t rank, std::uint64_t seed,
                       const PsdOptions& opts) {
  if (dim == 0 || rank == 0 || rank > dim) {
    throw Error(ErrorCode::invalid_input, "rand_psd: need 1 <= rank <= dim");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    const ComplexMatrix g = rand_ginibre(dim, rank, rng);
    const ComplexMatrix a = g * g.adjoint();
    const PsdSpectrum s = psd_spectrum(a, opts.rank_tol);
    if (s.rank == rank && s.eig.eigenvalues[rank - 1] >= opts.min_eig_ratio * s.lambda_max) {
      return a;
    }
  }
  throw Error(ErrorCode::generation, "rand_psd: resampling exhausted after " +
                                         std::to_string(opts.max_attempts) + " attempts");
}

ComplexMatrix normalize_seminorm(const SemiHilbertContext& ctx, ComplexMatrix t, Rng& rng) {
  const double target = 0.5 + 1.5 * rng.uniform();
  const double current = a_op_seminorm(ctx, t);
  if (current > 0.0) t *= cplx(target / current);
  return t;
}

ComplexMatrix rand_in_B_A(const SemiHilbertContext& ctx, std::uint64_t seed, bool normalize) {
  Rng rng(seed);
  const std::size_t n = ctx.dim();
  const ComplexMatrix g = rand_ginibre(n, n, rng);
  const ComplexMatrix& p = ctx.range_projector();
  // full rank: N(A) = {0}, skip the projection so G comes back bit-for-bit
  ComplexMatrix t = ctx.rank() == n ? g : g - p * g * (ComplexMatrix::identity(n) - p);
  return normalize ? normalize_seminorm(ctx, std::move(t), rng) : t;
}

ComplexMatrix rand_a_selfadjoint(const SemiHilbertContext& ctx, std::uint64_t seed,
                                 bool normalize) {
  Rng rng(mix_seed(seed, 1));
  const ComplexMatrix x = rand_in_B_A(ctx, seed, false);
  ComplexMatrix t = 0.5 * (x + a_adjoint(ctx, x));
  return normalize ? normalize_seminorm(ctx, std::move(t), rng) : t;
}

ComplexMatrix rand_a_positive(const SemiHilbertContext& ctx, std::uint64_t seed,
                              bool normalize) {
  Rng rng(mix_seed(seed, 2));
  const ComplexMatrix x = rand_in_B_A(ctx, seed, false);
  ComplexMatrix t = a_adjoint(ctx, x) * x;
  return normalize ? normalize_seminorm(ctx, std::move(t), rng) : t;
}

}  // namespace anumrad
