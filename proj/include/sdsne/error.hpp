#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdsne {

enum class ErrorKind {
  NonPositiveSigma,
  NonFiniteFeature,
  AsymmetricInput,
  NegativeEntry,
  DimensionMismatch,
  SizeLimitExceeded,
  EigensolverFailure,
  EmptyViewList,
  NonFiniteLoss,
  NonFiniteGradient,
  ViewRowMismatch,
  InvalidConfig,
  InvariantViolation,
  TooManyClusters,
  EmptyInput,
  NonSquare,
  NonFinite,
  LengthMismatch,
  EmptyPartition,
  NoViewsFound,
  RowCountMismatch,
  MalformedNumber,
  MissingK,
  IoFailure,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorKind::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::EmptyViewList: return "EmptyViewList";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorKind::ViewRowMismatch: return "ViewRowMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::TooManyClusters: return "TooManyClusters";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyPartition: return "EmptyPartition";
    case ErrorKind::NoViewsFound: return "NoViewsFound";
    case ErrorKind::RowCountMismatch: return "RowCountMismatch";
    case ErrorKind::MalformedNumber: return "MalformedNumber";
    case ErrorKind::MissingK: return "MissingK";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; kind() is the
/// machine-readable category, what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sdsne
