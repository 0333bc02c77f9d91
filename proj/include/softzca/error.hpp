#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace softzca {

/// Failure categories. Each maps onto one CLI exit code (see exit_code()).
enum class ErrorKind {
  kInvalidInput,        // non-finite values, bad arguments
  kShape,               // dimension or row-count mismatch
  kDegenerateSample,    // too few rows to estimate statistics
  kDegenerateCloud,     // all points identical
  kZeroVector,          // zero-norm row in a cosine computation
  kInvalidSpectrum,     // non-positive synthetic spectrum entry
  kRankZero,            // zero covariance, whitening undefined
  kDecompositionFailure,
  kIo,
  kFormat,
  kConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

std::string_view to_string(ErrorKind kind) noexcept;

/// 2 = input/format, 3 = numerical failure, 4 = configuration.
int exit_code(ErrorKind kind) noexcept;

}  // namespace softzca
