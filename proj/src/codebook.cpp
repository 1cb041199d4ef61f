#include "latfade/codebook.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "latfade/error.hpp"
#include "latfade/rng.hpp"

namespace latfade {
namespace {

void check_args(const Lattice& lattice, double alpha, double power) {
  if (std::fabs(lattice.volume() - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument,
                "base lattice must have unit volume, got " + std::to_string(lattice.volume()));
  }
  if (!(alpha > 0.0) || !(power > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha and P must be positive");
  }
}

CVector draw_shift(const Lattice& lattice, double alpha, std::uint64_t seed) {
  Engine rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RVector u(lattice.rank());
  for (int i = 0; i < lattice.rank(); ++i) u(i) = unit(rng);
  return to_complex(alpha * (lattice.generators().transpose() * u));
}

std::size_t count_codewords(const Lattice& lattice, double alpha, double power,
                            const CVector& shift, std::size_t max_points) {
  const double radius = std::sqrt(lattice.k() * power) / alpha;
  return count_ball(lattice, radius, -shift / alpha, max_points);
}

ShiftSearch finish(const Lattice& lattice, double alpha, double power,
                   const std::vector<std::size_t>& counts, const std::vector<CVector>& shifts,
                   std::size_t max_points) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < counts.size(); ++t) {
    if (counts[t] > counts[best]) best = t;
  }
  ShiftSearch out{carve(lattice, alpha, power, shifts[best], max_points), shifts[best],
                  cardinality_guarantee(lattice.k(), power, alpha), false, best};
  out.guarantee_met = static_cast<double>(out.code.size()) >= out.guarantee;
  return out;
}

}  // namespace

double ball_volume_constant(int k) {
  const double pi = std::acos(-1.0);
  return std::exp(k * std::log(pi * k) - std::lgamma(k + 1.0));
}

double cardinality_guarantee(int k, double power, double alpha) {
  return ball_volume_constant(k) * std::pow(power, k) / std::pow(alpha, 2.0 * k);
}

FiniteCode carve(const Lattice& lattice, double alpha, double power, const CVector& shift,
                 std::size_t max_points) {
  check_args(lattice, alpha, power);
  if (shift.size() != lattice.k()) {
    throw Error(ErrorKind::DimensionMismatch, "shift dimension differs from lattice k");
  }
  const int k = lattice.k();
  const double radius = std::sqrt(k * power) / alpha;
  const auto points = enumerate_ball(lattice, radius, -shift / alpha, max_points);
  FiniteCode code{lattice, alpha, shift, power, {}, 0.0};
  code.codewords.reserve(points.size());
  for (const auto& p : points) {
    CVector x = shift + alpha * p.embedding;
    if (x.squaredNorm() / k <= power + 1e-12) code.codewords.push_back(std::move(x));
  }
  code.rate_bits = code.codewords.empty() ? 0.0 : rate(code);
  return code;
}

double rate(const FiniteCode& code) {
  if (code.codewords.empty()) throw Error(ErrorKind::EmptyCode, "code has no codewords");
  return std::log2(static_cast<double>(code.codewords.size())) / code.k();
}

ShiftSearch find_shift(const Lattice& lattice, double alpha, double power, std::size_t trials,
                       std::uint64_t seed, std::size_t max_points) {
  check_args(lattice, alpha, power);
  if (trials == 0) throw Error(ErrorKind::InvalidTrials, "trials must be positive");
  std::vector<CVector> shifts(trials);
  std::vector<std::size_t> counts(trials, 0);
  std::atomic<bool> overflowed{false};
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t t = 0; t < trials; ++t) {
    shifts[t] = draw_shift(lattice, alpha, derive_seed(seed, t));
    try {
      counts[t] = count_codewords(lattice, alpha, power, shifts[t], max_points);
    } catch (const Error&) {
      overflowed = true;
    }
  }
  if (overflowed) {
    throw Error(ErrorKind::Overflow, "a shifted ball holds more than " +
                                         std::to_string(max_points) + " codewords");
  }
  return finish(lattice, alpha, power, counts, shifts, max_points);
}

namespace reference {

ShiftSearch find_shift(const Lattice& lattice, double alpha, double power, std::size_t trials,
                       std::uint64_t seed, std::size_t max_points) {
  check_args(lattice, alpha, power);
  if (trials == 0) throw Error(ErrorKind::InvalidTrials, "trials must be positive");
  std::vector<CVector> shifts(trials);
  std::vector<std::size_t> counts(trials, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    shifts[t] = draw_shift(lattice, alpha, derive_seed(seed, t));
    counts[t] = count_codewords(lattice, alpha, power, shifts[t], max_points);
  }
  return finish(lattice, alpha, power, counts, shifts, max_points);
}

}  // namespace reference
}  // namespace latfade
