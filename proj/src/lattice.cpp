#include "latfade/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latfade/error.hpp"
#include "select.hpp"

namespace latfade {

RVector to_real(const CVector& x) {
  RVector out(2 * x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out(2 * i) = x(i).real();
    out(2 * i + 1) = x(i).imag();
  }
  return out;
}

CVector to_complex(const RVector& x) {
  CVector out(x.size() / 2);
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = Complex(x(2 * i), x(2 * i + 1));
  return out;
}

Lattice::Lattice(RMatrix generators) : generators_(std::move(generators)) {
  const auto n = generators_.rows();
  if (n == 0 || n != generators_.cols() || n % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected 2k generators with 2k real coordinates each, got " +
                    std::to_string(n) + "x" + std::to_string(generators_.cols()));
  }
  if (!generators_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "generator entries must be finite");
  }
  k_ = static_cast<int>(n / 2);

  Eigen::JacobiSVD<RMatrix> svd(generators_);
  const RVector& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(n - 1) < 1e-10 * sv(0)) {
    throw Error(ErrorKind::RankDeficient, "generators are not linearly independent over R");
  }

  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix wide = generators_.cast<long double>();
  volume_ = static_cast<double>(std::fabs(wide.partialPivLu().determinant()));
  gram_ = generators_ * generators_.transpose();

  reduced_ = generators_;
  reduction_ = lll_reduce(reduced_);
}

CVector Lattice::generator(int i) const { return to_complex(generators_.row(i).transpose()); }

CVector Lattice::embed(std::span<const long long> coeffs) const {
  if (static_cast<int>(coeffs.size()) != rank()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient vector has wrong length");
  }
  RVector x = RVector::Zero(rank());
  for (int i = 0; i < rank(); ++i) {
    if (coeffs[i] != 0) x += static_cast<double>(coeffs[i]) * generators_.row(i).transpose();
  }
  return to_complex(x);
}

bool LatticePoint::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; });
}

Lattice make_lattice(const std::vector<CVector>& generators) {
  const auto n = static_cast<Eigen::Index>(generators.size());
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "expected an even, nonzero number of generators");
  }
  RMatrix rows(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (generators[i].size() != n / 2) {
      throw Error(ErrorKind::DimensionMismatch,
                  "generator " + std::to_string(i) + " has complex dimension " +
                      std::to_string(generators[i].size()) + ", expected " +
                      std::to_string(n / 2));
    }
    rows.row(i) = to_real(generators[i]).transpose();
  }
  return Lattice(std::move(rows));
}

Lattice scale(const Lattice& lattice, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::NonPositiveScale, "scale factor must be positive, got " +
                                                 std::to_string(c));
  }
  if (c == 1.0) return lattice;
  return Lattice(c * lattice.generators());
}

Lattice normalize_volume(const Lattice& lattice) {
  return scale(lattice, std::pow(lattice.volume(), -1.0 / lattice.rank()));
}

Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> lll_reduce(RMatrix& basis,
                                                                    double delta) {
  using IMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = basis.rows();
  IMatrix transform = IMatrix::Identity(n, n);
  if (n < 2) return transform;

  RMatrix mu = RMatrix::Zero(n, n);
  RVector bstar_sq(n);
  auto orthogonalize = [&] {
    RMatrix bstar = basis;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        mu(i, j) = basis.row(i).dot(bstar.row(j)) / bstar_sq(j);
        bstar.row(i) -= mu(i, j) * bstar.row(j);
      }
      bstar_sq(i) = bstar.row(i).squaredNorm();
    }
  };
  orthogonalize();

  Eigen::Index k = 1;
  long iterations = 0;
  while (k < n) {
    if (++iterations > 1'000'000) {
      throw Error(ErrorKind::InvalidArgument, "LLL did not terminate");
    }
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double q = std::nearbyint(mu(k, j));
      if (q == 0.0) continue;
      basis.row(k) -= q * basis.row(j);
      transform.row(k) -= static_cast<long long>(q) * transform.row(j);
      mu(k, j) -= q;
      for (Eigen::Index l = 0; l < j; ++l) mu(k, l) -= q * mu(j, l);
    }
    if (bstar_sq(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar_sq(k - 1)) {
      ++k;
    } else {
      basis.row(k).swap(basis.row(k - 1));
      transform.row(k).swap(transform.row(k - 1));
      orthogonalize();
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return transform;
}

std::pair<double, LatticePoint> shortest_vector_sq(const Lattice& lattice) {
  double radius_sq = lattice.reduced_basis().rowwise().squaredNorm().minCoeff();
  const auto points =
      enumerate_ball(lattice, std::sqrt(radius_sq), CVector::Zero(lattice.k()));
  std::vector<double> norms(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) norms[i] = points[i].embedding.squaredNorm();
  // The ball always contains the reduced basis vector that set its radius.
  const auto best = detail::select_minimizer(points, norms);
  return {norms[*best], points[*best]};
}

double hermite_invariant(const Lattice& lattice) {
  return shortest_vector_sq(lattice).first / std::pow(lattice.volume(), 1.0 / lattice.k());
}

}  // namespace latfade
