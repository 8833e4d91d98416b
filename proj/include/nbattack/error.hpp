#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nbattack {

enum class ErrorCode {
  invalid_params,
  not_regular,
  disconnected,
  requires_symmetric_p,
  nonpositive_sigma,
  insufficient_samples,
  state_space_too_large,
  multiple_closed_classes,
  convergence_failure,
  nonpositive_input,
  rstar_out_of_range,
  invalid_dims,
  domain_error,
  empty_sample,
  config_invalid,
  io_failure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// that the command-line driver can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nbattack
