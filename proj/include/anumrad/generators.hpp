#pragma once

#include <cstdint>

#include "anumrad/semihilbert.hpp"

namespace anumrad {

/// SplitMix64 finalizer; also used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Identifies one trial of a batch; equal specs give bit-identical draws.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  std::uint64_t stream_seed() const { return mix_seed(master_seed, trial_index); }
  /// Seed for a named sub-stream (weight, first operator, ...) of this trial.
  std::uint64_t substream(std::uint64_t tag) const { return mix_seed(stream_seed(), tag); }
};

/// SplitMix64 stream with Box-Muller normals. Portable and bit-reproducible,
/// unlike the standard library distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  /// Complex standard normal: real and imaginary parts i.i.d. N(0, 1).
  cplx complex_normal();

 private:
  std::uint64_t state_;
};

ComplexMatrix rand_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix rand_ginibre(std::size_t dim, std::uint64_t seed);

struct PsdOptions {
  double rank_tol = kDefaultRankTol;
  /// Smallest kept eigenvalue relative to lambda_max; draws below are resampled.
  double min_eig_ratio = 1e-3;
  int max_attempts = 10;
};

/// G G* with G a dim x rank Ginibre draw, resampled until its numerical rank
/// equals `rank` and the kept spectrum clears min_eig_ratio.
ComplexMatrix rand_psd(std::size_t dim, std::size_t rank, std::uint64_t seed,
                       const PsdOptions& opts = {});

/// Scales a nonzero operator so that ||T||_A is uniform in [0.5, 2].
ComplexMatrix normalize_seminorm(const SemiHilbertContext& ctx, ComplexMatrix t, Rng& rng);

/// G - P G (I - P): removes the block mapping N(A) into R(A).
/// With `normalize`, the result is rescaled by normalize_seminorm.
ComplexMatrix rand_in_B_A(const SemiHilbertContext& ctx, std::uint64_t seed,
                          bool normalize = true);
/// (X + X#)/2 for X = rand_in_B_A.
ComplexMatrix rand_a_selfadjoint(const SemiHilbertContext& ctx, std::uint64_t seed,
                                 bool normalize = true);
/// X# X for X = rand_in_B_A.
ComplexMatrix rand_a_positive(const SemiHilbertContext& ctx, std::uint64_t seed,
                              bool normalize = true);

}  // namespace anumrad
