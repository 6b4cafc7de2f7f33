#pragma once

#include <stdexcept>
#include <string>

namespace intervalkit {

enum class ErrorCode {
  invalid_argument,
  out_of_domain,
  side_required,
  undefined_derivative,
  singular_derivative,
  unknown_family,
  invalid_params,
  degenerate_fit,
  no_convergence,
  config_error,
  execution_error,
};

const char* error_code_name(ErrorCode code);

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

}  // namespace intervalkit
