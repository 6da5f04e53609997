#pragma once

#include <cstdint>

#include "anumrad/generators.hpp"
#include "anumrad/matrix.hpp"

namespace anumrad::test {

inline ComplexMatrix jordan() { return {{0, 1}, {0, 0}}; }

inline ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) { return rand_ginibre(n, seed); }

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  const ComplexMatrix g = rand_ginibre(n, seed);
  return 0.5 * (g + g.adjoint());
}

// Frobenius distance relative to 1 + ||b||_F.
inline double rel_dist(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm() / (1.0 + b.frobenius_norm());
}

// Small deterministic case generator for property tests.
struct Case {
  std::size_t dim;
  std::size_t rank;
  std::uint64_t seed;
};

inline std::vector<Case> cases(std::size_t count, std::uint64_t seed, bool singular_only = false) {
  std::vector<Case> out;
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t dim = 2 + rng.uniform_int(0, 4);
    std::size_t rank = dim;
    if (singular_only || k % 2 == 1) rank = rng.uniform_int(1, dim - 1);
    out.push_back({dim, rank, rng.next_u64()});
  }
  return out;
}

}  // namespace anumrad::test
