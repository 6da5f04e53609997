#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "anumrad/error.hpp"
#include "anumrad/harness/sharpness.hpp"
#include "anumrad/harness/verify.hpp"

namespace anumrad::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitViolation = 4,
};

/// Maps an error kind onto the 2/3 exit codes.
int exit_code_for(ErrorCode code);

struct ComputeArgs {
  std::string weight;
  std::string op;
  std::optional<std::string> op2;
  std::string quantity;
  std::optional<double> tol;
  std::optional<std::string> sign;
  std::optional<std::string> out;
};

struct VerifyArgs {
  std::string checks = "all";
  std::string dims = "2,3,4,5,6";
  std::string ranks = "mixed";
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::optional<std::string> out;
};

struct SharpnessArgs {
  std::string chain = "C_KIT";
  std::size_t dim = 2;
  int restarts = 200;
  std::uint64_t seed = 7;
  std::optional<std::size_t> pair;
  std::optional<std::string> weight;
  std::optional<std::string> sign;
  std::optional<std::string> out;
};

struct ReplayArgs {
  std::string witness;
  std::optional<std::string> check;
};

// Each command writes its JSON report to args.out (or `out` when unset) and
// a one-line summary to `log`, and returns the process exit code.
int cmd_compute(const ComputeArgs& args, std::ostream& out, std::ostream& log);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& log);
int cmd_sharpness(const SharpnessArgs& args, std::ostream& out, std::ostream& log);
int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& log);

}  // namespace anumrad::harness
