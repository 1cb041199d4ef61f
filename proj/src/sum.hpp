#pragma once

#include <cmath>
#include <vector>

namespace latfade::detail {

/// Neumaier-compensated sum in index order.
inline double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace latfade::detail
