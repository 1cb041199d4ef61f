// Fincke-Pohst enumeration of lattice points in a Euclidean ball, run on the
// LLL-reduced basis and reported in the original basis.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "latfade/error.hpp"
#include "latfade/lattice.hpp"

namespace latfade {
namespace {

struct Frame {
  int n = 0;
  RMatrix mu;       // Gram-Schmidt coefficients of the reduced basis, mu(i, j) for j < i
  RVector bstar_sq; // squared Gram-Schmidt norms
  RVector target;   // center expressed in the reduced basis
  double bound = 0; // squared radius with boundary slack
};

Frame prepare(const Lattice& lattice, double radius, const CVector& center) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  }
  if (center.size() != lattice.k()) {
    throw Error(ErrorKind::DimensionMismatch, "center has complex dimension " +
                                                  std::to_string(center.size()) + ", lattice k=" +
                                                  std::to_string(lattice.k()));
  }
  const RMatrix& basis = lattice.reduced_basis();
  Frame f;
  f.n = lattice.rank();
  f.mu = RMatrix::Zero(f.n, f.n);
  f.bstar_sq = RVector(f.n);
  RMatrix bstar = basis;
  for (int i = 0; i < f.n; ++i) {
    for (int j = 0; j < i; ++j) {
      f.mu(i, j) = basis.row(i).dot(bstar.row(j)) / f.bstar_sq(j);
      bstar.row(i) -= f.mu(i, j) * bstar.row(j);
    }
    f.bstar_sq(i) = bstar.row(i).squaredNorm();
  }
  f.target = basis.transpose().partialPivLu().solve(to_real(center));
  f.bound = radius * radius * (1.0 + kBoundarySlack);
  return f;
}

// Depth-first walk below `level`; `visit` returns false to abort.
template <class Visit>
bool descend(const Frame& f, Coeffs& z, int level, double partial, Visit& visit) {
  double shift = 0.0;
  for (int i = level + 1; i < f.n; ++i) {
    shift += f.mu(i, level) * (static_cast<double>(z[i]) - f.target(i));
  }
  const double c = f.target(level) - shift;
  const double rem = f.bound - partial;
  if (rem < 0.0) return true;
  const double w = std::sqrt(rem / f.bstar_sq(level));
  const auto lo = static_cast<long long>(std::ceil(c - w));
  const auto hi = static_cast<long long>(std::floor(c + w));
  for (long long v = lo; v <= hi; ++v) {
    const double d = static_cast<double>(v) - c;
    const double next = partial + f.bstar_sq(level) * d * d;
    if (next > f.bound) continue;
    z[level] = v;
    if (level == 0) {
      if (!visit(z)) return false;
    } else if (!descend(f, z, level - 1, next, visit)) {
      return false;
    }
  }
  z[level] = 0;
  return true;
}

std::pair<long long, long long> top_range(const Frame& f) {
  const int top = f.n - 1;
  const double c = f.target(top);
  const double w = std::sqrt(f.bound / f.bstar_sq(top));
  return {static_cast<long long>(std::ceil(c - w)), static_cast<long long>(std::floor(c + w))};
}

// Enumerates the subtree with the top reduced coordinate fixed to `v`.
template <class Visit>
bool branch(const Frame& f, long long v, Visit& visit) {
  const int top = f.n - 1;
  const double d = static_cast<double>(v) - f.target(top);
  const double partial = f.bstar_sq(top) * d * d;
  if (partial > f.bound) return true;
  Coeffs z(f.n, 0);
  z[top] = v;
  if (top == 0) return visit(z);
  return descend(f, z, top - 1, partial, visit);
}

[[noreturn]] void overflow(std::size_t max_points) {
  throw Error(ErrorKind::Overflow,
              "ball holds more than " + std::to_string(max_points) + " lattice points");
}

std::vector<LatticePoint> finish(const Lattice& lattice,
                                 const std::vector<std::vector<Coeffs>>& buckets) {
  const auto& u = lattice.reduction();
  const RMatrix& reduced = lattice.reduced_basis();
  const int n = lattice.rank();
  std::vector<LatticePoint> points;
  for (const auto& bucket : buckets) {
    for (const Coeffs& z : bucket) {
      LatticePoint p;
      p.coeffs.assign(n, 0);
      RVector x = RVector::Zero(n);
      for (int i = 0; i < n; ++i) {
        if (z[i] == 0) continue;
        x += static_cast<double>(z[i]) * reduced.row(i).transpose();
        for (int j = 0; j < n; ++j) p.coeffs[j] += z[i] * u(i, j);
      }
      p.embedding = to_complex(x);
      points.push_back(std::move(p));
    }
  }
  std::sort(points.begin(), points.end(),
            [](const LatticePoint& a, const LatticePoint& b) { return a.coeffs < b.coeffs; });
  return points;
}

}  // namespace

std::vector<LatticePoint> enumerate_ball(const Lattice& lattice, double radius,
                                         const CVector& center, std::size_t max_points) {
  const Frame f = prepare(lattice, radius, center);
  const auto [lo, hi] = top_range(f);
  const long long width = hi >= lo ? hi - lo + 1 : 0;
  std::vector<std::vector<Coeffs>> buckets(static_cast<std::size_t>(width));
  std::atomic<std::size_t> total{0};
  std::atomic<bool> overflowed{false};

#pragma omp parallel for schedule(dynamic, 1)
  for (long long idx = 0; idx < width; ++idx) {
    if (overflowed.load(std::memory_order_relaxed)) continue;
    auto& bucket = buckets[static_cast<std::size_t>(idx)];
    auto visit = [&](const Coeffs& z) {
      if (total.fetch_add(1, std::memory_order_relaxed) >= max_points) {
        overflowed.store(true, std::memory_order_relaxed);
        return false;
      }
      bucket.push_back(z);
      return true;
    };
    branch(f, lo + idx, visit);
  }
  if (overflowed.load()) overflow(max_points);
  return finish(lattice, buckets);
}

std::size_t count_ball(const Lattice& lattice, double radius, const CVector& center,
                       std::size_t max_points) {
  const Frame f = prepare(lattice, radius, center);
  const auto [lo, hi] = top_range(f);
  std::size_t total = 0;
  auto visit = [&](const Coeffs&) { return ++total <= max_points; };
  for (long long v = lo; v <= hi; ++v) {
    if (!branch(f, v, visit)) overflow(max_points);
  }
  return total;
}

namespace reference {

std::vector<LatticePoint> enumerate_ball(const Lattice& lattice, double radius,
                                         const CVector& center, std::size_t max_points) {
  const Frame f = prepare(lattice, radius, center);
  const auto [lo, hi] = top_range(f);
  std::vector<std::vector<Coeffs>> buckets(1);
  std::size_t total = 0;
  auto visit = [&](const Coeffs& z) {
    if (++total > max_points) return false;
    buckets[0].push_back(z);
    return true;
  };
  for (long long v = lo; v <= hi; ++v) {
    if (!branch(f, v, visit)) overflow(max_points);
  }
  return finish(lattice, buckets);
}

}  // namespace reference
}  // namespace latfade
