#include "sphwiener/error.hpp"

namespace sphwiener {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidBandlimit: return "invalid-bandlimit";
    case ErrorCode::kInvalidOrder: return "invalid-order";
    case ErrorCode::kUndersampledGrid: return "undersampled-grid";
    case ErrorCode::kBandlimitMismatch: return "bandlimit-mismatch";
    case ErrorCode::kInvalidScaleRange: return "invalid-scale-range";
    case ErrorCode::kInvalidDilation: return "invalid-dilation";
    case ErrorCode::kInvalidDirectionality: return "invalid-directionality";
    case ErrorCode::kModeMismatch: return "mode-mismatch";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kNotHermitian: return "not-hermitian";
    case ErrorCode::kNotPositiveSemidefinite: return "not-positive-semidefinite";
    case ErrorCode::kNegativeVariance: return "negative-variance";
    case ErrorCode::kUndefinedSnr: return "undefined-snr";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNumerical: return "numerical";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

}  // namespace sphwiener
