// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/error.hpp"

namespace pcup {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NonFinite: return "NonFinite";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::CountTooLarge: return "CountTooLarge";
    case Errc::RateTooLarge: return "RateTooLarge";
    case Errc::PatchLargerThanCloud: return "PatchLargerThanCloud";
    case Errc::CloudTooSmall: return "CloudTooSmall";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::TooFewReferencePoints: return "TooFewReferencePoints";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingProperty: return "MissingProperty";
    case Errc::IoError: return "IoError";
    case Errc::MissingCheckpoint: return "MissingCheckpoint";
    case Errc::IncompatibleCheckpoint: return "IncompatibleCheckpoint";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace pcup
