#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sphwiener {

enum class ErrorCode {
  kInvalidBandlimit,
  kInvalidOrder,
  kUndersampledGrid,
  kBandlimitMismatch,
  kInvalidScaleRange,
  kInvalidDilation,
  kInvalidDirectionality,
  kModeMismatch,
  kDimensionMismatch,
  kNotHermitian,
  kNotPositiveSemidefinite,
  kNegativeVariance,
  kUndefinedSnr,
  kInvalidParameter,
  kConfig,
  kIo,
  kNumerical,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers which
/// contract was violated without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace sphwiener
