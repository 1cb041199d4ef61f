#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latfade/types.hpp"

namespace latfade {

inline constexpr std::size_t kDefaultMaxPoints = 10'000'000;

/// Relative slack applied to squared radii so that points lying exactly on a
/// sphere survive floating point round-off.
inline constexpr double kBoundarySlack = 1e-10;

/// A full-rank lattice of real rank 2k in C^k.
///
/// Generators are stored as the rows of a real 2k x 2k matrix in interleaved
/// (re, im) coordinates. The constructor also computes an LLL-reduced copy of
/// the basis that enumeration works with; the original basis is kept for
/// coefficient reporting.
class Lattice {
 public:
  /// Rows of `generators` are the basis vectors. Throws DimensionMismatch for
  /// a non-square or odd-sized matrix and RankDeficient when the smallest
  /// singular value is below 1e-10 times the largest.
  explicit Lattice(RMatrix generators);

  int k() const { return k_; }
  int rank() const { return 2 * k_; }

  const RMatrix& generators() const { return generators_; }
  const RMatrix& gram() const { return gram_; }
  double volume() const { return volume_; }

  /// LLL-reduced basis (rows) and the unimodular matrix U with reduced = U * generators.
  const RMatrix& reduced_basis() const { return reduced_; }
  const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& reduction() const {
    return reduction_;
  }

  CVector generator(int i) const;
  CVector embed(std::span<const long long> coeffs) const;

 private:
  int k_ = 0;
  RMatrix generators_;
  RMatrix gram_;
  double volume_ = 0.0;
  RMatrix reduced_;
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> reduction_;
};

struct LatticePoint {
  Coeffs coeffs;       // coordinates in the original generator basis
  CVector embedding;   // sum_i coeffs[i] * b_i

  bool is_zero() const;
};

/// Builds a lattice from 2k complex generators of dimension k.
Lattice make_lattice(const std::vector<CVector>& generators);

inline double volume(const Lattice& lattice) { return lattice.volume(); }

/// Multiplies every generator by c > 0. Throws NonPositiveScale otherwise.
Lattice scale(const Lattice& lattice, double c);

/// Rescales to unit volume.
Lattice normalize_volume(const Lattice& lattice);

/// LLL reduction (delta in (1/4, 1)) of the rows of `basis`, in place.
/// Returns the unimodular transform U such that new_basis = U * old_basis.
Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> lll_reduce(RMatrix& basis,
                                                                    double delta = 0.99);

/// All lattice points x with ||x - center|| <= radius, sorted lexicographically
/// by their coefficients. Throws Overflow when more than `max_points` exist.
/// Top-level enumeration branches run in parallel; the result does not depend
/// on the thread count.
std::vector<LatticePoint> enumerate_ball(const Lattice& lattice, double radius,
                                         const CVector& center,
                                         std::size_t max_points = kDefaultMaxPoints);

/// Number of points enumerate_ball would return (no sorting or embedding).
std::size_t count_ball(const Lattice& lattice, double radius, const CVector& center,
                       std::size_t max_points = kDefaultMaxPoints);

/// Squared length of a shortest nonzero vector and one achiever. Among ties
/// the lexicographically greatest coefficient vector is returned.
std::pair<double, LatticePoint> shortest_vector_sq(const Lattice& lattice);

/// min ||x||^2 / Vol^{1/k}; invariant under scaling.
double hermite_invariant(const Lattice& lattice);

namespace reference {

/// Single-threaded enumeration kept as the reference for the parallel kernel.
std::vector<LatticePoint> enumerate_ball(const Lattice& lattice, double radius,
                                         const CVector& center,
                                         std::size_t max_points = kDefaultMaxPoints);

}  // namespace reference

}  // namespace latfade
