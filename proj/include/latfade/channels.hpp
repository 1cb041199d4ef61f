#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "latfade/forms.hpp"
#include "latfade/rng.hpp"
#include "latfade/types.hpp"

namespace latfade {

enum class ChannelKind { awgn, iid_rayleigh_diag, block_fading_diag, mimo2_block };

/// Linear fading channel y = H[x] + w with unit noise variance per complex dimension.
struct ChannelModel {
  ChannelKind kind = ChannelKind::awgn;
  int k = 1;
  int block = 1;            // block_fading_diag: coherence length n, n | k
  bool iid_blocks = false;  // mimo2_block: fresh 2x2 matrix per 4-symbol frame
};

/// Validating constructor. Throws BlockMismatch when n does not divide k, or
/// when k is not a multiple of 4 for mimo2_block.
ChannelModel make_channel(ChannelKind kind, int k, int block = 1, bool iid_blocks = false);

std::string to_string(ChannelKind kind);

/// One channel realization.
///
/// Diagonal kinds store the k diagonal entries in `coeffs`; mimo2_block stores
/// one 2x2 matrix (h1, h2, h3, h4 row-major) per 4-coordinate frame, acting as
/// (h1 x1 + h2 x2, h3 x1 + h4 x2, h1 x3 + h2 x4, h3 x3 + h4 x4).
struct ChannelDraw {
  ChannelKind kind = ChannelKind::awgn;
  int k = 1;
  std::vector<Complex> coeffs;
  double log_det_sq = 0.0;  // log2 det(H H^dagger)
  std::size_t rejected = 0; // singular draws redrawn

  /// det(H H^dagger)^{1/k}
  double det_term() const;
  /// |det H|^{-1/k}, the factor mapping H into the unit-determinant group.
  double normalization() const;
  CMatrix dense() const;
  /// |det H|^{-1/k} H
  CMatrix normalized() const;
};

ChannelDraw sample_channel(const ChannelModel& model, std::uint64_t seed);
ChannelDraw sample_channel(const ChannelModel& model, Engine& rng);

/// H[x] = (H x^T)^T.
CVector apply_channel(const ChannelDraw& draw, const CVector& x);

/// y0 + w with w i.i.d. circular complex Gaussian, variance 1 per coordinate.
CVector add_noise(const CVector& y0, std::uint64_t seed);
CVector add_noise(const CVector& y0, Engine& rng);

struct MuEstimate {
  double mu = 0.0;      // (1/k) E log2 det(H H^dagger), bits
  double std_error = 0.0;
};

/// Monte Carlo estimate of the ergodic constant mu. Requires trials >= 100.
MuEstimate estimate_mu(const ChannelModel& model, std::size_t trials, std::uint64_t seed);

/// The unit-determinant group the model's normalized draws live in.
MatrixGroupSpec group_of(const ChannelModel& model);

namespace reference {

MuEstimate estimate_mu(const ChannelModel& model, std::size_t trials, std::uint64_t seed);

}  // namespace reference

}  // namespace latfade
