#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace latfade {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Coeffs = std::vector<long long>;

/// Interleaved (re, im, re, im, ...) real coordinates of a complex vector.
RVector to_real(const CVector& x);
CVector to_complex(const RVector& x);

}  // namespace latfade
