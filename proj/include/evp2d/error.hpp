#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evp2d {

enum class ErrorKind {
  DimensionMismatch,
  NonFinite,
  NotHermitian,
  NotIndefinite,
  NoConvergence,
  RankDeficient,
  ParseError,
  NotNormalized,
  NotSimple,
  NotAnEigenvalue,
  NoIsotropicVector,
  Singular,
  ContinuationAmbiguous,
  BracketInvalid,
  NotIndefiniteOnCluster,
  RankCollapse,
  IndefinitenessLost,
  NotOrthonormal,
  TooShort,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this exception; `kind()` lets
/// callers branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace evp2d
