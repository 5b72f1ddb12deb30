#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace discarg {

enum class ErrorKind {
  kParse,
  kIntegrity,
  kStructure,
  kMapping,
  kAlignment,
  kReference,
  kSegmentation,
  kNuclearity,
  kArgument,
  kBounds,
  kCorruption,
  kFormat,
  kShape,
  kNumeric,
  kStaleness,
  kDivergence,
  kUnsupportedMode,
  kSplit,
  kEmptyReport,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind so
// that the CLI can map it onto exit codes and JSON error records.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace discarg
