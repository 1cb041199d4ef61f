#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "latfade/lattice.hpp"

namespace latfade::detail {

/// Index of the minimal value among nonzero points. Values within a relative
/// 1e-9 of the minimum are ties; ties go to the smaller Euclidean norm, then to
/// the lexicographically greatest coefficient vector.
inline std::optional<std::size_t> select_minimizer(const std::vector<LatticePoint>& points,
                                                   const std::vector<double>& values) {
  std::optional<std::size_t> best;
  double best_value = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].is_zero()) continue;
    if (!best || values[i] < best_value) {
      best_value = values[i];
      best = i;
    }
  }
  if (!best) return best;
  const double tol = 1e-9 * std::max(best_value, 1e-300);
  std::size_t chosen = *best;
  double chosen_norm = points[chosen].embedding.squaredNorm();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].is_zero() || values[i] > best_value + tol) continue;
    const double norm = points[i].embedding.squaredNorm();
    const double ntol = 1e-9 * std::max(chosen_norm, 1e-300);
    if (norm < chosen_norm - ntol ||
        (norm <= chosen_norm + ntol && points[i].coeffs > points[chosen].coeffs)) {
      chosen = i;
      chosen_norm = norm;
    }
  }
  return chosen;
}

}  // namespace latfade::detail
