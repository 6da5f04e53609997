#include "anumrad/harness/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iterator>
#include <limits>

#include "anumrad/error.hpp"
#include "anumrad/generators.hpp"

#ifndef ANUMRAD_VERSION
#define ANUMRAD_VERSION "0.0.0"
#endif

namespace anumrad::harness {

namespace {

constexpr double kReplayTol = 1e-12;

// Stream tags within one trial.
constexpr std::uint64_t kWeightStream = 1;
constexpr std::uint64_t kFirstStream = 2;
constexpr std::uint64_t kSecondStream = 3;
constexpr std::uint64_t kRankStream = 4;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool needs_second(const CheckId& id) {
  return std::visit([](auto v) { return needs_second_operator(v); }, id);
}

bool needs_selfadjoint(const CheckId& id) {
  return std::visit([](auto v) { return requires_selfadjoint(v); }, id);
}

bool refines_kittaneh(const CheckId& id) {
  const auto* c = std::get_if<ChainId>(&id);
  return c != nullptr && (*c == ChainId::thm1 || *c == ChainId::thn || *c == ChainId::corf ||
                          *c == ChainId::thm2);
}

std::string_view sign_name(Sign s) { return s == Sign::plus ? "+" : "-"; }

double json_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::parse, std::string("witness: missing number \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

std::uint64_t json_u64(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw Error(ErrorCode::parse, std::string("witness: missing integer \"") + key + "\"");
  }
  return j.at(key).get<std::uint64_t>();
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string version_string() { return ANUMRAD_VERSION; }

std::string check_name(const CheckId& id) {
  return std::visit([](auto v) { return std::string(to_string(v)); }, id);
}

std::optional<CheckId> parse_check_id(std::string_view name) {
  if (auto c = parse_chain_id(name)) return CheckId{*c};
  if (auto e = parse_identity_id(name)) return CheckId{*e};
  return std::nullopt;
}

std::vector<CheckId> parse_check_list(std::string_view spec) {
  std::vector<CheckId> out;
  auto add_chains = [&] {
    for (ChainId c : kAllChains) out.emplace_back(c);
  };
  auto add_identities = [&] {
    for (IdentityId e : kAllIdentities) out.emplace_back(e);
  };
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string_view item =
        spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (item == "all") {
      add_chains();
      add_identities();
    } else if (item == "chains") {
      add_chains();
    } else if (item == "identities") {
      add_identities();
    } else if (auto id = parse_check_id(item)) {
      out.push_back(*id);
    } else {
      throw Error(ErrorCode::invalid_input, "unknown check id '" + std::string(item) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string_view to_string(RankPolicy p) {
  switch (p) {
    case RankPolicy::full: return "full";
    case RankPolicy::deficient: return "deficient";
    case RankPolicy::mixed: return "mixed";
  }
  return "mixed";
}

std::optional<RankPolicy> parse_rank_policy(std::string_view name) {
  for (RankPolicy p : {RankPolicy::full, RankPolicy::deficient, RankPolicy::mixed}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

void TrialConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::invalid_input, "trials must be >= 1");
  if (dims.empty()) throw Error(ErrorCode::invalid_input, "dims must not be empty");
  for (std::size_t d : dims) {
    if (d < 2) throw Error(ErrorCode::invalid_input, "every dim must be >= 2");
  }
  if (checks.empty()) throw Error(ErrorCode::invalid_input, "no checks selected");
  if (!(cmp_tol >= 0.0) || !std::isfinite(cmp_tol)) {
    throw Error(ErrorCode::invalid_input, "cmp_tol must be finite and >= 0");
  }
}

TrialInstance make_trial(const CheckId& check, const TrialConfig& config, std::uint64_t trial) {
  const SeedSpec spec{mix_seed(config.seed, fnv1a(check_name(check))), trial};
  const std::size_t nd = config.dims.size();
  const std::size_t dim = config.dims[trial % nd];

  Rng rank_rng(spec.substream(kRankStream));
  const auto deficient_rank = [&] {
    return static_cast<std::size_t>(rank_rng.uniform_int(1, dim - 1));
  };
  std::size_t rank = dim;
  switch (config.ranks) {
    case RankPolicy::full: break;
    case RankPolicy::deficient: rank = deficient_rank(); break;
    case RankPolicy::mixed:
      // Two of every three sweeps over the dims use a singular weight.
      if ((trial / nd) % 3 != 0) rank = deficient_rank();
      break;
  }

  PsdOptions psd;
  psd.rank_tol = config.rank_tol;
  ComplexMatrix a = rand_psd(dim, rank, spec.substream(kWeightStream), psd);
  const SemiHilbertContext ctx = make_context(a, config.rank_tol, config.cmp_tol);

  std::string population = "in_B_A";
  std::function<ComplexMatrix(std::uint64_t)> draw = [&](std::uint64_t seed) {
    return rand_in_B_A(ctx, seed);
  };
  if (needs_selfadjoint(check)) {
    const bool positive = std::holds_alternative<ChainId>(check) && trial % 2 == 1;
    population = positive ? "a_positive" : "a_selfadjoint";
    draw = [&, positive](std::uint64_t seed) {
      return positive ? rand_a_positive(ctx, seed) : rand_a_selfadjoint(ctx, seed);
    };
  }

  ComplexMatrix t = draw(spec.substream(kFirstStream));
  std::optional<ComplexMatrix> s;
  if (needs_second(check)) s = draw(spec.substream(kSecondStream));

  std::optional<Sign> sign;
  if (const auto* c = std::get_if<ChainId>(&check); c != nullptr && takes_sign(*c)) {
    sign = trial % 2 == 0 ? Sign::plus : Sign::minus;
  }

  return TrialInstance{check,          config.seed,        trial,          dim,
                       rank,           std::move(population), sign,       config.cmp_tol,
                       config.rank_tol, std::move(a),       std::move(t),   std::move(s)};
}

TrialOutcome run_trial(const TrialInstance& inst) {
  TrialOutcome out;
  try {
    const ContextPtr ctx = share(make_context(inst.a, inst.rank_tol, inst.cmp_tol));
    if (const auto* c = std::get_if<ChainId>(&inst.check)) {
      auto r = evaluate_chain(*c, ctx, inst.t, inst.s, inst.sign.value_or(Sign::plus));
      out.passed = r.passed;
      out.margin = r.min_margin();
      out.quadrature_warning = r.quadrature_warning;
      out.chain = std::move(r);
    } else {
      auto r = check_identity(std::get<IdentityId>(inst.check), ctx, inst.t, inst.s);
      out.passed = r.passed;
      out.margin = r.margin();
      out.identity = std::move(r);
    }
  } catch (const Error& e) {
    out.passed = false;
    out.margin = -std::numeric_limits<double>::infinity();
    out.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return out;
}

bool BatchReport::all_passed() const {
  for (const auto& c : checks) {
    if (c.passed != c.trials) return false;
  }
  return true;
}

BatchReport run_verify(const TrialConfig& config) {
  config.validate();
  BatchReport report{config, {}};
  for (const CheckId& id : config.checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckSummary sum{.id = id, .min_margin = std::numeric_limits<double>::infinity()};
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
      std::optional<TrialInstance> inst;
      TrialOutcome outcome;
      try {
        inst = make_trial(id, config, trial);
        outcome = run_trial(*inst);
      } catch (const Error& e) {
        outcome.passed = false;
        outcome.margin = -std::numeric_limits<double>::infinity();
        outcome.error = std::string(to_string(e.code())) + ": " + e.what();
      }
      ++sum.trials;
      if (outcome.passed) ++sum.passed;
      if (!outcome.error.empty()) ++sum.errors;
      if (outcome.quadrature_warning) ++sum.quadrature_warnings;
      if (outcome.chain && outcome.passed && refines_kittaneh(id)) {
        const auto& terms = outcome.chain->terms;
        const double tol = config.cmp_tol;
        if (terms[1].value < terms[0].value - allowed_slack(terms[0].value, tol) ||
            terms[1].value > terms[2].value + allowed_slack(terms[2].value, tol)) {
          ++sum.dominance_violations;
        }
      }

      if (inst) {
        auto it = std::find_if(sum.populations.begin(), sum.populations.end(),
                               [&](const auto& p) { return p.name == inst->population; });
        if (it == sum.populations.end()) {
          sum.populations.push_back({inst->population, 0, 0, std::numeric_limits<double>::infinity()});
          it = std::prev(sum.populations.end());
        }
        ++it->trials;
        if (outcome.passed) ++it->passed;
        it->min_margin = std::min(it->min_margin, outcome.margin);
      }
      if (outcome.margin < sum.min_margin || !sum.witness) {
        sum.min_margin = outcome.margin;
        sum.worst_trial = trial;
        // A trial whose generation threw has no instance to persist.
        sum.witness = std::move(inst);
        sum.witness_outcome = std::move(outcome);
      }
    }
    sum.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(sum));
  }
  return report;
}

Json chain_report_to_json(const InequalityChainReport& r) {
  Json j;
  j["chain"] = to_string(r.chain);
  j["sign"] = r.sign ? Json(sign_name(*r.sign)) : Json(nullptr);
  Json terms = Json::array();
  for (const auto& t : r.terms) terms.push_back(Json{{"name", t.name}, {"value", t.value}});
  j["terms"] = std::move(terms);
  j["margins"] = r.margins;
  j["passed"] = r.passed;
  j["slack_used"] = r.slack_used;
  j["quadrature_warning"] = r.quadrature_warning;
  return j;
}

Json identity_report_to_json(const IdentityReport& r) {
  Json j;
  j["identity"] = to_string(r.identity);
  Json clauses = Json::array();
  for (const auto& c : r.clauses) {
    clauses.push_back(Json{{"name", c.name},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs},
                           {"deviation", c.deviation},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed}});
  }
  j["clauses"] = std::move(clauses);
  j["relative_deviation"] = r.relative_deviation;
  j["passed"] = r.passed;
  return j;
}

Json witness_to_json(const TrialInstance& inst, const TrialOutcome& outcome) {
  Json j;
  j["check"] = check_name(inst.check);
  j["master_seed"] = inst.master_seed;
  j["trial_index"] = inst.trial_index;
  j["dim"] = inst.dim;
  j["rank"] = inst.rank;
  j["population"] = inst.population;
  j["sign"] = inst.sign ? Json(sign_name(*inst.sign)) : Json(nullptr);
  j["cmp_tol"] = inst.cmp_tol;
  j["rank_tol"] = inst.rank_tol;
  j["A"] = matrix_to_json(inst.a);
  j["T"] = matrix_to_json(inst.t);
  j["S"] = inst.s ? matrix_to_json(*inst.s) : Json(nullptr);
  j["margin"] = std::isfinite(outcome.margin) ? Json(outcome.margin) : Json(nullptr);
  j["passed"] = outcome.passed;
  if (outcome.chain) j["report"] = chain_report_to_json(*outcome.chain);
  if (outcome.identity) j["report"] = identity_report_to_json(*outcome.identity);
  if (!outcome.error.empty()) j["error"] = outcome.error;
  return j;
}

Witness witness_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "witness must be an object");
  if (!j.contains("check") || !j.at("check").is_string()) {
    throw Error(ErrorCode::parse, "witness: missing \"check\"");
  }
  const auto check = parse_check_id(j.at("check").get<std::string>());
  if (!check) throw Error(ErrorCode::parse, "witness: unknown check id");
  std::optional<Sign> sign;
  if (j.contains("sign") && j.at("sign").is_string()) {
    const auto s = j.at("sign").get<std::string>();
    if (s != "+" && s != "-") throw Error(ErrorCode::parse, "witness: sign must be + or -");
    sign = s == "+" ? Sign::plus : Sign::minus;
  }
  if (!j.contains("A") || !j.contains("T")) throw Error(ErrorCode::parse, "witness: missing A or T");
  std::optional<ComplexMatrix> s;
  if (j.contains("S") && !j.at("S").is_null()) s = matrix_from_json(j.at("S"));
  const double margin = j.contains("margin") && j.at("margin").is_number()
                            ? j.at("margin").get<double>()
                            : -std::numeric_limits<double>::infinity();
  const bool passed = j.contains("passed") && j.at("passed").is_boolean() && j.at("passed").get<bool>();
  TrialInstance inst{*check,
                     json_u64(j, "master_seed"),
                     json_u64(j, "trial_index"),
                     static_cast<std::size_t>(json_u64(j, "dim")),
                     static_cast<std::size_t>(json_u64(j, "rank")),
                     j.value("population", std::string()),
                     sign,
                     json_number(j, "cmp_tol"),
                     json_number(j, "rank_tol"),
                     matrix_from_json(j.at("A")),
                     matrix_from_json(j.at("T")),
                     std::move(s)};
  return {std::move(inst), margin, passed};
}

ReplayResult replay_witness(const Witness& w) {
  const TrialOutcome out = run_trial(w.instance);
  ReplayResult r{check_name(w.instance.check), w.margin, out.margin, w.passed, out.passed, false};
  const bool both_infinite = std::isinf(w.margin) && std::isinf(out.margin);
  const bool margin_ok = both_infinite || std::abs(w.margin - out.margin) <= kReplayTol;
  r.reproduced = margin_ok && w.passed == out.passed;
  return r;
}

Json report_to_json(const BatchReport& report, bool include_timestamp) {
  Json j;
  j["schema"] = "anumrad.batch_report/1";
  j["version"] = version_string();
  Json cfg;
  Json ids = Json::array();
  for (const auto& c : report.config.checks) ids.push_back(check_name(c));
  cfg["checks"] = std::move(ids);
  cfg["dims"] = report.config.dims;
  cfg["ranks"] = to_string(report.config.ranks);
  cfg["trials"] = report.config.trials;
  cfg["seed"] = report.config.seed;
  cfg["cmp_tol"] = report.config.cmp_tol;
  cfg["rank_tol"] = report.config.rank_tol;
  j["config"] = std::move(cfg);

  Json results = Json::array();
  Json timing;
  for (const auto& c : report.checks) {
    Json r;
    r["id"] = check_name(c.id);
    r["kind"] = std::holds_alternative<ChainId>(c.id) ? "chain" : "identity";
    r["trials"] = c.trials;
    r["passed"] = c.passed;
    r["errors"] = c.errors;
    r["quadrature_warnings"] = c.quadrature_warnings;
    r["dominance_violations"] = c.dominance_violations;
    r["min_margin"] = std::isfinite(c.min_margin) ? Json(c.min_margin) : Json(nullptr);
    r["worst_trial"] = c.worst_trial;
    Json pops = Json::array();
    for (const auto& p : c.populations) {
      pops.push_back(Json{{"population", p.name},
                          {"trials", p.trials},
                          {"passed", p.passed},
                          {"min_margin", std::isfinite(p.min_margin) ? Json(p.min_margin)
                                                                     : Json(nullptr)}});
    }
    r["populations"] = std::move(pops);
    r["witness"] = c.witness ? witness_to_json(*c.witness, c.witness_outcome) : Json(nullptr);
    if (!c.witness && !c.witness_outcome.error.empty()) r["worst_error"] = c.witness_outcome.error;
    results.push_back(std::move(r));
    timing[check_name(c.id)] = c.wall_time_s;
  }
  j["results"] = std::move(results);
  j["all_passed"] = report.all_passed();
  if (include_timestamp) {
    j["timestamp"] = Json{{"utc", utc_now()}, {"wall_time_s", std::move(timing)}};
  }
  return j;
}

}  // namespace anumrad::harness
