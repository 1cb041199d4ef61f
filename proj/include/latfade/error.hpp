#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latfade {

enum class ErrorKind {
  // validation
  RankDeficient,
  DimensionMismatch,
  NonPositiveScale,
  InvalidArgument,
  UnsupportedGroup,
  ZeroVector,
  BadConductor,
  NotTotallyComplex,
  InconsistentDiscriminant,
  NormMismatch,
  InvalidTrials,
  BlockMismatch,
  Parse,
  // search / overflow
  Overflow,
  EmptySearch,
  NonIntegerNorm,
  // simulation
  EmptyCode,
  UncertifiedInvariant,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of this kind: 2 validation, 3 search or
/// overflow, 4 simulation.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace latfade
