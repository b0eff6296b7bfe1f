#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permeable {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  undecidable_at_tolerance,
  unsupported_family_dimension,
  disconnected,
  no_construction_available,
  not_permeable_family,
  budget_exhausted,
  all_samples_rejected,
  detour_leaves_chart,
  out_of_domain,
  negative_input,
  depth_exceeded,
  no_finite_pair,
  subset_violation,
  precondition_failed,
  schema_violation,
  unknown_kind,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// that callers (the CLI in particular) can map it to a structured report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::undecidable_at_tolerance: return "undecidable_at_tolerance";
    case ErrorCode::unsupported_family_dimension: return "unsupported_family_dimension";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::no_construction_available: return "no_construction_available";
    case ErrorCode::not_permeable_family: return "not_permeable_family";
    case ErrorCode::budget_exhausted: return "budget_exhausted";
    case ErrorCode::all_samples_rejected: return "all_samples_rejected";
    case ErrorCode::detour_leaves_chart: return "detour_leaves_chart";
    case ErrorCode::out_of_domain: return "out_of_domain";
    case ErrorCode::negative_input: return "negative_input";
    case ErrorCode::depth_exceeded: return "depth_exceeded";
    case ErrorCode::no_finite_pair: return "no_finite_pair";
    case ErrorCode::subset_violation: return "subset_violation";
    case ErrorCode::precondition_failed: return "precondition_failed";
    case ErrorCode::schema_violation: return "schema_violation";
    case ErrorCode::unknown_kind: return "unknown_kind";
  }
  return "unknown_error";
}

}  // namespace permeable
