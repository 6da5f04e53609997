#pragma once

#include <cstdint>
#include <optional>

#include "anumrad/harness/matrix_io.hpp"
#include "anumrad/inequalities.hpp"

namespace anumrad::harness {

struct SharpnessConfig {
  ChainId chain = ChainId::kit;
  std::size_t dim = 2;
  int restarts = 200;
  std::uint64_t seed = 7;
  /// Minimize margins[*pair] instead of the smallest margin.
  std::optional<std::size_t> pair;
  /// Weight to search under; a random full-rank PSD matrix when absent.
  std::optional<ComplexMatrix> weight;
  Sign sign = Sign::plus;
  /// Chain evaluations allowed per restart.
  int budget = 600;
  double initial_step = 0.25;
  double final_step = 1e-9;
};

struct SharpnessResult {
  SharpnessConfig config;
  ComplexMatrix a;
  ComplexMatrix t;
  std::optional<ComplexMatrix> s;
  InequalityChainReport report;
  /// The minimized quantity for the best instance.
  double objective;
  int restarts_run = 0;
  long evaluations = 0;
};

/// Random-restart hill climbing over T (and S) with coordinate-wise complex
/// perturbations. restarts == 0 evaluates the seed instance only.
SharpnessResult run_sharpness(const SharpnessConfig& config);

Json sharpness_to_json(const SharpnessResult& r);

}  // namespace anumrad::harness
