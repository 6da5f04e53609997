#include "anumrad/harness/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "anumrad/error.hpp"

namespace anumrad::harness {

namespace {

void emit(const Json& j, const std::optional<std::string>& path, std::ostream& out) {
  if (path) {
    write_json_file(*path, j);
  } else {
    out << j.dump(2) << '\n';
  }
}

Json error_json(const Error& e) {
  return Json{{"kind", to_string(e.code())}, {"message", e.what()}, {"residual", e.residual()}};
}

std::vector<std::size_t> parse_dims(std::string_view s) {
  std::vector<std::size_t> dims;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    std::size_t d = 0;
    const char* first = s.data() + pos;
    const char* last = s.data() + comma;
    auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec != std::errc() || ptr != last) {
      throw Error(ErrorCode::parse, "bad dims list '" + std::string(s) + "'");
    }
    dims.push_back(d);
    pos = comma + 1;
  }
  return dims;
}

Sign parse_sign(const std::optional<std::string>& s) {
  if (!s || *s == "+" || *s == "plus") return Sign::plus;
  if (*s == "-" || *s == "minus") return Sign::minus;
  throw Error(ErrorCode::parse, "sign must be + or -");
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return kExitParse;
    default: return kExitPrecondition;
  }
}

int cmd_compute(const ComputeArgs& args, std::ostream& out, std::ostream& log) {
  Json j;
  j["schema"] = "anumrad.compute_report/1";
  j["version"] = version_string();
  j["quantity"] = args.quantity;
  try {
    const ComplexMatrix a = read_matrix_file(args.weight);
    const ComplexMatrix tm = read_matrix_file(args.op);
    std::optional<ComplexMatrix> sm;
    if (args.op2) sm = read_matrix_file(*args.op2);
    const Sign sign = parse_sign(args.sign);
    const auto chain = parse_chain_id(args.quantity);
    const auto identity = parse_identity_id(args.quantity);

    static const std::vector<std::string> kPlain = {
        "norm", "omega", "spectral_radius", "adjoint", "re", "im", "gamma", "compress",
        "membership"};
    if (!chain && !identity &&
        std::find(kPlain.begin(), kPlain.end(), args.quantity) == kPlain.end()) {
      throw Error(ErrorCode::parse, "unknown quantity '" + args.quantity + "'");
    }
    if (args.tol && !(*args.tol >= 0.0 && std::isfinite(*args.tol))) {
      throw Error(ErrorCode::parse, "--tol must be finite and >= 0");
    }

    const ContextPtr ctx = share(make_context(a, kDefaultRankTol, args.tol.value_or(default_cmp_tol())));
    j["cmp_tol"] = ctx->cmp_tol();
    j["rank"] = ctx->rank();
    int code = kExitOk;
    if (chain) {
      if (needs_second_operator(*chain) && !sm) {
        throw Error(ErrorCode::precondition, std::string(to_string(*chain)) + " needs --op2");
      }
      const auto r = evaluate_chain(*chain, ctx, tm, sm, sign);
      j["result"] = chain_report_to_json(r);
      if (!r.passed) code = kExitViolation;
    } else if (identity) {
      if (needs_second_operator(*identity) && !sm) {
        throw Error(ErrorCode::precondition, std::string(to_string(*identity)) + " needs --op2");
      }
      const auto r = check_identity(*identity, ctx, tm, sm);
      j["result"] = identity_report_to_json(r);
      if (!r.passed) code = kExitViolation;
    } else {
      const AOperator t(ctx, tm);
      const std::string& q = args.quantity;
      if (q == "norm") {
        j["value"] = t.seminorm();
      } else if (q == "omega") {
        j["value"] = t.numerical_radius();
      } else if (q == "spectral_radius") {
        j["value"] = t.spectral_radius();
      } else if (q == "adjoint") {
        j["value"] = matrix_to_json(t.adjoint());
      } else if (q == "re") {
        j["value"] = matrix_to_json(t.re());
      } else if (q == "im") {
        j["value"] = matrix_to_json(t.im());
      } else if (q == "gamma") {
        j["value"] = gamma(t);
      } else if (q == "compress") {
        j["value"] = matrix_to_json(t.compressed());
      } else {
        const Membership ba = in_B_A(*ctx, tm);
        const Membership bh = in_B_A_half(*ctx, tm);
        j["value"] = Json{{"B_A", {{"holds", ba.holds}, {"residual", ba.residual}}},
                          {"B_A_half", {{"holds", bh.holds}, {"residual", bh.residual}}},
                          {"a_selfadjoint", is_a_selfadjoint(*ctx, tm)},
                          {"a_positive", is_a_positive(*ctx, tm)}};
      }
    }
    j["exit_code"] = code;
    emit(j, args.out, out);
    log << args.quantity << (code == kExitOk ? ": ok" : ": violation") << '\n';
    return code;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    j["error"] = error_json(e);
    j["exit_code"] = code;
    log << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    try {
      emit(j, args.out, out);
    } catch (const Error&) {
    }
    return code;
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& log) {
  TrialConfig cfg;
  try {
    cfg.checks = parse_check_list(args.checks);
    cfg.dims = parse_dims(args.dims);
    const auto ranks = parse_rank_policy(args.ranks);
    if (!ranks) throw Error(ErrorCode::parse, "ranks must be full, deficient or mixed");
    cfg.ranks = *ranks;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    if (args.tol) cfg.cmp_tol = *args.tol;
    cfg.validate();
  } catch (const Error& e) {
    log << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitParse;
  }

  const BatchReport report = run_verify(cfg);
  emit(report_to_json(report), args.out, out);
  for (const auto& c : report.checks) {
    log << check_name(c.id) << ": " << c.passed << "/" << c.trials << " passed, min margin "
        << c.min_margin << ", " << c.wall_time_s << " s\n";
  }
  return report.all_passed() ? kExitOk : kExitViolation;
}

int cmd_sharpness(const SharpnessArgs& args, std::ostream& out, std::ostream& log) {
  SharpnessConfig cfg;
  try {
    const auto chain = parse_chain_id(args.chain);
    if (!chain) throw Error(ErrorCode::parse, "unknown chain '" + args.chain + "'");
    cfg.chain = *chain;
    cfg.dim = args.dim;
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    cfg.pair = args.pair;
    cfg.sign = parse_sign(args.sign);
    if (args.weight) cfg.weight = read_matrix_file(*args.weight);
    const SharpnessResult r = run_sharpness(cfg);
    emit(sharpness_to_json(r), args.out, out);
    log << args.chain << ": best objective " << r.objective << " after " << r.evaluations
        << " evaluations\n";
    return kExitOk;
  } catch (const Error& e) {
    log << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& log) {
  try {
    const Json doc = read_json_file(args.witness);
    std::vector<Json> witnesses;
    if (doc.is_object() && doc.contains("results")) {
      for (const auto& r : doc.at("results")) {
        if (!r.contains("witness") || r.at("witness").is_null()) continue;
        if (args.check && r.value("id", std::string()) != *args.check) continue;
        witnesses.push_back(r.at("witness"));
      }
    } else {
      witnesses.push_back(doc);
    }
    if (witnesses.empty()) throw Error(ErrorCode::parse, "no witness found");

    Json results = Json::array();
    bool all = true;
    for (const auto& w : witnesses) {
      const ReplayResult r = replay_witness(witness_from_json(w));
      all = all && r.reproduced;
      auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
      results.push_back(Json{{"check", r.check},
                             {"recorded_margin", num(r.recorded_margin)},
                             {"replayed_margin", num(r.replayed_margin)},
                             {"recorded_passed", r.recorded_passed},
                             {"replayed_passed", r.replayed_passed},
                             {"reproduced", r.reproduced}});
      log << r.check << (r.reproduced ? ": reproduced" : ": NOT reproduced") << '\n';
    }
    out << Json{{"schema", "anumrad.replay/1"}, {"replays", results}}.dump(2) << '\n';
    return all ? kExitOk : kExitViolation;
  } catch (const Error& e) {
    log << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace anumrad::harness
