#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnr {

enum class ErrorKind {
  InvalidInput,
  NotHermitian,
  Defective,
  NoConvergence,
  SpectrumNotSectorial,
  NegativeSpectrum,
  NotAccretive,
  DimensionTooSmall,
  WrongDimension,
  DimensionMismatch,
  PreconditionFailed,
  EstimatorNotConverged,
  UnknownBound,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qnr
