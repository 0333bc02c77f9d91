#include "softzca/error.hpp"

namespace softzca {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kDegenerateSample: return "degenerate sample";
    case ErrorKind::kDegenerateCloud: return "degenerate cloud";
    case ErrorKind::kZeroVector: return "zero vector";
    case ErrorKind::kInvalidSpectrum: return "invalid spectrum";
    case ErrorKind::kRankZero: return "rank-zero covariance";
    case ErrorKind::kDecompositionFailure: return "decomposition failure";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kConfig: return "config error";
  }
  return "error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kRankZero:
    case ErrorKind::kDecompositionFailure:
    case ErrorKind::kDegenerateCloud:
      return 3;
    case ErrorKind::kConfig:
      return 4;
    default:
      return 2;
  }
}

}  // namespace softzca
