#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anumrad {

enum class ErrorCode {
  dimension,
  invalid_input,
  not_psd,
  zero_weight,
  not_adjointable,
  not_bounded,
  precondition,
  generation,
  parse,
  context,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code and, for membership failures,
/// the residual that triggered it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double residual = 0.0)
      : std::runtime_error(what), code_(code), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace anumrad
