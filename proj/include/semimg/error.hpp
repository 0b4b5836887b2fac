#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semimg {

enum class ErrorCategory {
  invalid_argument,
  precondition,
  singular,
  evaluation,
  convergence,
  degenerate,
  internal,
  io,
};

std::string_view to_string(ErrorCategory category);

/// Base exception for every failure raised by the library. The category is
/// stable and machine readable; the CLI maps it to an exit code.
class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

/// Nonlinear iteration failed; carries the last residual 2-norm.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(ErrorCategory::convergence, what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

inline void require(bool condition, ErrorCategory category, const std::string& what) {
  if (!condition) fail(category, what);
}

}  // namespace semimg
