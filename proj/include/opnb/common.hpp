// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace opnb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// Estimated densities are floored at 1e-300 before logs are taken, so a
// far-tail point yields a very negative log instead of -inf. Every place
// that logs a density uses the same pair.
inline constexpr double kDensityFloor = 1e-300;
inline constexpr double kLogDensityFloor = -690.77552789821368;

// Error codes surfaced by the library. The category determines the CLI
// exit code (usage = 1, data = 2, numeric = 3).
enum class Errc {
  // data contract violations
  NonFiniteEntry,
  EmptyClass,
  DimensionMismatch,
  EmptySample,
  EmptyTable,
  NoClassesRemain,
  TargetTooLarge,
  ClassTooSmall,
  ParseError,
  // numeric failures
  DegenerateRange,
  DegenerateSample,
  DegenerateRow,
  ZeroStandardDeviation,
  ZeroVariance,
  SingularCovariance,
  RankDeficient,
  NonFiniteObjective,
  LineSearchFailure,
  DimensionTooLow,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline bool is_data_error(Errc c) {
  switch (c) {
    case Errc::NonFiniteEntry:
    case Errc::EmptyClass:
    case Errc::DimensionMismatch:
    case Errc::EmptySample:
    case Errc::EmptyTable:
    case Errc::NoClassesRemain:
    case Errc::TargetTooLarge:
    case Errc::ClassTooSmall:
    case Errc::ParseError:
      return true;
    default:
      return false;
  }
}

}  // namespace opnb
