#include "discarg/errors.hpp"

namespace discarg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIntegrity: return "integrity";
    case ErrorKind::kStructure: return "structure";
    case ErrorKind::kMapping: return "mapping";
    case ErrorKind::kAlignment: return "alignment";
    case ErrorKind::kReference: return "reference";
    case ErrorKind::kSegmentation: return "segmentation";
    case ErrorKind::kNuclearity: return "nuclearity";
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kBounds: return "bounds";
    case ErrorKind::kCorruption: return "corruption";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kStaleness: return "staleness";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kUnsupportedMode: return "unsupported-mode";
    case ErrorKind::kSplit: return "split";
    case ErrorKind::kEmptyReport: return "empty-report";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace discarg
