#include "agnn/errors.hpp"

namespace agnn {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return "invalid_argument";
    case ErrorCategory::kInvalidState: return "invalid_state";
    case ErrorCategory::kDegenerateGeometry: return "degenerate_geometry";
    case ErrorCategory::kDivergence: return "divergence";
    case ErrorCategory::kMissingArtifact: return "missing_artifact";
    case ErrorCategory::kConfig: return "config_error";
    case ErrorCategory::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace agnn
