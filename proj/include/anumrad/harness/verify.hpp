#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "anumrad/harness/matrix_io.hpp"
#include "anumrad/inequalities.hpp"

namespace anumrad::harness {

using CheckId = std::variant<ChainId, IdentityId>;

std::string check_name(const CheckId& id);
std::optional<CheckId> parse_check_id(std::string_view name);
/// "all", "chains", "identities", or a comma-separated list of ids.
std::vector<CheckId> parse_check_list(std::string_view spec);

enum class RankPolicy { full, deficient, mixed };
std::string_view to_string(RankPolicy p);
std::optional<RankPolicy> parse_rank_policy(std::string_view name);

struct TrialConfig {
  std::vector<CheckId> checks = parse_check_list("all");
  std::vector<std::size_t> dims{2, 3, 4, 5, 6};
  RankPolicy ranks = RankPolicy::mixed;
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  double cmp_tol = default_cmp_tol();
  double rank_tol = kDefaultRankTol;

  /// Throws invalid_input on trials == 0, dims < 2 or an empty check list.
  void validate() const;
};

/// One fully materialized trial: everything needed to re-run it.
struct TrialInstance {
  CheckId check;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  std::size_t dim = 0;
  std::size_t rank = 0;
  std::string population;
  std::optional<Sign> sign;
  double cmp_tol = kDefaultCmpTol;
  double rank_tol = kDefaultRankTol;
  ComplexMatrix a;
  ComplexMatrix t;
  std::optional<ComplexMatrix> s;
};

TrialInstance make_trial(const CheckId& check, const TrialConfig& config, std::uint64_t trial);

struct TrialOutcome {
  bool passed = false;
  /// Chains: smallest consecutive margin. Identities: min(tolerance - deviation).
  double margin = 0.0;
  bool quadrature_warning = false;
  std::optional<InequalityChainReport> chain;
  std::optional<IdentityReport> identity;
  /// Non-empty when evaluation threw; the trial then counts as failed.
  std::string error;
};

TrialOutcome run_trial(const TrialInstance& inst);

struct PopulationStats {
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double min_margin = 0.0;
};

struct CheckSummary {
  CheckId id;
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::size_t errors = 0;
  std::size_t quadrature_warnings = 0;
  /// Refinement dominance violations (middle term outside [first, last]).
  std::size_t dominance_violations = 0;
  double min_margin = 0.0;
  std::uint64_t worst_trial = 0;
  std::optional<TrialInstance> witness{};
  TrialOutcome witness_outcome{};
  std::vector<PopulationStats> populations{};
  double wall_time_s = 0.0;
};

struct BatchReport {
  TrialConfig config;
  std::vector<CheckSummary> checks;

  bool all_passed() const;
};

BatchReport run_verify(const TrialConfig& config);

/// Report JSON. Timing lives under the single "timestamp" field so that two
/// runs with equal configuration differ only there.
Json report_to_json(const BatchReport& report, bool include_timestamp = true);

Json chain_report_to_json(const InequalityChainReport& r);
Json identity_report_to_json(const IdentityReport& r);
Json witness_to_json(const TrialInstance& inst, const TrialOutcome& outcome);
/// Reads a witness object back; the stored margin is returned alongside.
struct Witness {
  TrialInstance instance;
  double margin;
  bool passed;
};
Witness witness_from_json(const Json& j);

struct ReplayResult {
  std::string check;
  double recorded_margin;
  double replayed_margin;
  bool recorded_passed;
  bool replayed_passed;
  bool reproduced;
};

/// Re-runs a witness; reproduced iff the margin agrees within 1e-12 and the
/// pass/fail status matches.
ReplayResult replay_witness(const Witness& w);

std::string version_string();

}  // namespace anumrad::harness
