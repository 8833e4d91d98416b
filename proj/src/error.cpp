#include "nbattack/error.hpp"

namespace nbattack {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::not_regular: return "not-regular";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::requires_symmetric_p: return "requires-symmetric-p";
    case ErrorCode::nonpositive_sigma: return "nonpositive-sigma";
    case ErrorCode::insufficient_samples: return "insufficient-samples";
    case ErrorCode::state_space_too_large: return "state-space-too-large";
    case ErrorCode::multiple_closed_classes: return "multiple-closed-classes";
    case ErrorCode::convergence_failure: return "convergence-failure";
    case ErrorCode::nonpositive_input: return "nonpositive-input";
    case ErrorCode::rstar_out_of_range: return "rstar-out-of-range";
    case ErrorCode::invalid_dims: return "invalid-dims";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::empty_sample: return "empty-sample";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

}  // namespace nbattack
