#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qphase {

enum class ErrorCode {
  invalid_argument,
  resolution_exceeded,
  convergence_failure,
  bracket_error,
  degenerate_input,
  numerical_consistency,
  insufficient_data,
  unreachable_accuracy,
  out_of_range,
  singular_point,
  solution_rejected,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; the C API maps it to a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qphase
