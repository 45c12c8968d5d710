#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rete {

enum class ErrorCode {
  kIo,
  kFormat,
  kConfig,
  kInvalidArgument,
  kShape,
  kNumeric,
  kMissingArtifact,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. The code maps onto the CLI's `ERROR <code>:` prefix.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rete
