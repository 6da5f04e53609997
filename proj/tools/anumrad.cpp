#include <iostream>

#include "CLI11.hpp"

#include "anumrad/harness/commands.hpp"

using namespace anumrad::harness;

int main(int argc, char** argv) {
  CLI::App app{"Weighted numerical radius toolkit"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "evaluate one quantity, chain or identity");
  c->add_option("--weight", compute.weight, "A as a matrix file")->required();
  c->add_option("--op", compute.op, "T as a matrix file")->required();
  c->add_option("--op2", compute.op2, "S as a matrix file");
  c->add_option("--quantity", compute.quantity,
                "norm|omega|spectral_radius|adjoint|re|im|gamma|compress|membership or a check id")
      ->required();
  c->add_option("--tol", compute.tol, "comparison slack");
  c->add_option("--sign", compute.sign, "+ or - for C_REFAN / C_DROG0");
  c->add_option("--out", compute.out, "report path (stdout when omitted)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "run randomized trials of the chains and identities");
  v->add_option("--chains,--checks", verify.checks, "all, chains, identities or a list of ids");
  v->add_option("--dims", verify.dims, "comma-separated dimensions");
  v->add_option("--ranks", verify.ranks, "full, deficient or mixed");
  v->add_option("--trials", verify.trials, "trials per check");
  v->add_option("--seed", verify.seed, "master seed");
  v->add_option("--tol", verify.tol, "comparison slack");
  v->add_option("--out", verify.out, "report path (stdout when omitted)");

  SharpnessArgs sharp;
  auto* s = app.add_subcommand("sharpness", "search for near-equality instances of a chain");
  s->add_option("--chain", sharp.chain)->required();
  s->add_option("--dim", sharp.dim);
  s->add_option("--restarts", sharp.restarts);
  s->add_option("--seed", sharp.seed);
  s->add_option("--pair", sharp.pair, "minimize this margin instead of the smallest one");
  s->add_option("--weight", sharp.weight, "fixed weight matrix file");
  s->add_option("--sign", sharp.sign);
  s->add_option("--out", sharp.out);

  ReplayArgs replay;
  auto* r = app.add_subcommand("replay", "re-run a witness or every witness of a report");
  r->add_option("--witness", replay.witness)->required();
  r->add_option("--check", replay.check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  if (*c) return cmd_compute(compute, std::cout, std::cerr);
  if (*v) return cmd_verify(verify, std::cout, std::cerr);
  if (*s) return cmd_sharpness(sharp, std::cout, std::cerr);
  return cmd_replay(replay, std::cout, std::cerr);
}
