#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "latfade/lattice.hpp"

namespace latfade {

/// Finite code C = B(sqrt(kP)) intersected with shift + alpha * L.
struct FiniteCode {
  Lattice base;  // unit volume
  double alpha = 1.0;
  CVector shift;
  double power = 1.0;
  std::vector<CVector> codewords;
  double rate_bits = 0.0;

  int k() const { return base.k(); }
  std::size_t size() const { return codewords.size(); }
};

/// (pi k)^k / k!, the volume of B(sqrt(kP)) divided by P^k.
double ball_volume_constant(int k);

/// C_k P^k / alpha^{2k}: cardinality guarantee for a unit-volume lattice.
double cardinality_guarantee(int k, double power, double alpha);

/// All points of shift + alpha * L in the closed ball of radius sqrt(kP),
/// in lexicographic coefficient order. The base lattice must have unit
/// volume (1e-9). Throws Overflow above `max_points` codewords.
FiniteCode carve(const Lattice& lattice, double alpha, double power, const CVector& shift,
                 std::size_t max_points = kDefaultMaxPoints);

struct ShiftSearch {
  FiniteCode code;
  CVector shift;
  double guarantee = 0.0;
  bool guarantee_met = false;
  std::size_t best_trial = 0;
};

/// Carves with `trials` shifts drawn uniformly from the fundamental
/// parallelotope of alpha * L and keeps the largest code (lowest trial index
/// among ties). Throws InvalidTrials for trials = 0.
ShiftSearch find_shift(const Lattice& lattice, double alpha, double power, std::size_t trials,
                       std::uint64_t seed, std::size_t max_points = kDefaultMaxPoints);

/// log2|C| / k. Throws EmptyCode for an empty code.
double rate(const FiniteCode& code);

namespace reference {

ShiftSearch find_shift(const Lattice& lattice, double alpha, double power, std::size_t trials,
                       std::uint64_t seed, std::size_t max_points = kDefaultMaxPoints);

}  // namespace reference

}  // namespace latfade
