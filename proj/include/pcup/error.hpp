// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_ERROR_HPP
#define PCUP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcup {

enum class Errc {
  EmptyInput,
  NonFinite,
  KTooLarge,
  CountTooLarge,
  RateTooLarge,
  PatchLargerThanCloud,
  CloudTooSmall,
  InsufficientPoints,
  TooFewPoints,
  TooFewReferencePoints,
  DimensionMismatch,
  ShapeMismatch,
  EmptyDataset,
  InvalidArgument,
  ParseError,
  MissingProperty,
  IoError,
  MissingCheckpoint,
  IncompatibleCheckpoint,
};

std::string_view to_string(Errc code);

/// Every failure in the library surfaces as this exception; `code()` tells
/// callers which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace pcup

#endif  // PCUP_ERROR_HPP
