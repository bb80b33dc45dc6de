#pragma once

#include <stdexcept>
#include <string>

namespace specgate {

enum class Errc {
  EmptySpace,
  NonPositiveT,
  TOutOfRange,
  ShapeMismatch,
  TooManyAtoms,
  BadTheta,
  NegativeValues,
  NotProbability,
  TOutOfHalfOpen,
  NonPositiveLambda,
  DomainX,
  UnknownKind,
  WrongKind,
  EmptyXi,
  MaskMissing,
  EvaluationDomain,
  NegativeSamples,
  BadSchedule,
  BadResolution,
  WrongTopology,
  NonZeroMean,
  DLessThan3,
  BoundaryViolation,
  UncertifiedDimension,
  DegenerateVolume,
  ResolutionTooLow,
  NoConvergence,
  IoFailure,
  BadFlag,
  UnknownCommand,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace specgate
