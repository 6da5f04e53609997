#pragma once

#include <cstdint>

#include "anumrad/semihilbert.hpp"

namespace anumrad::harness {

struct OracleOptions {
  std::size_t samples = 100000;
  int ascent_steps = 50;
  /// Only the best `refine_top` samples are refined by ascent.
  std::size_t refine_top = 8;
  std::uint64_t seed = 0x5eed;
};

/// Brute-force sup of |<Tx, x>_A| over the A-unit sphere. Every returned value
/// is attained by an explicit x, so the result is a lower bound on omega_A(T).
double mc_omega_oracle(const SemiHilbertContext& ctx, const ComplexMatrix& t,
                       const OracleOptions& opts = {});

/// Brute-force sup of ||Tx||_A over the A-unit sphere; a lower bound on ||T||_A.
double mc_norm_oracle(const SemiHilbertContext& ctx, const ComplexMatrix& t,
                      const OracleOptions& opts = {});

}  // namespace anumrad::harness
