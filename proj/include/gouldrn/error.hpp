#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gouldrn {

enum class ErrorKind {
  EmptyBody,
  DimMismatch,
  NegativeScale,
  NotIncreasing,
  UnboundedSequence,
  CarrierMismatch,
  TooLarge,
  NoWitnessNeeded,
  NoExhaustion,
  NotExhaustion,
  NotStronglyAC,
  NotMultisubmeasure,
  NotAdditive,
  NotTotallyMeasurable,
  NotAChain,
  NotDisjoint,
  HypothesisFailed,
  ParseError,
  InvariantError,
  InternalError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gouldrn
