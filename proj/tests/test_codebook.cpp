#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "latfade/codebook.hpp"
#include "latfade/error.hpp"
#include "latfade/numfield.hpp"
#include "oracles.hpp"

using namespace latfade;
using oracle::vec;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

std::set<std::pair<double, double>> keyset(const FiniteCode& c) {
  std::set<std::pair<double, double>> s;
  for (const auto& x : c.codewords) {
    // k = 1 codes only
    s.insert({std::round(x(0).real() * 1e9) / 1e9, std::round(x(0).imag() * 1e9) / 1e9});
  }
  return s;
}

}  // namespace

TEST_CASE("ball volume constant") {
  CHECK(ball_volume_constant(1) == doctest::Approx(std::acos(-1.0)));
  const double pi = std::acos(-1.0);
  CHECK(ball_volume_constant(3) == doctest::Approx(std::pow(3 * pi, 3) / 6.0).epsilon(1e-12));
  CHECK(cardinality_guarantee(1, 1.0, 2.0) == doctest::Approx(pi / 4.0));
}

TEST_CASE("carve examples") {
  const Lattice z = oracle::gaussian_integers();
  const auto c0 = carve(z, 1.0, 1.0, CVector::Zero(1));
  CHECK(c0.size() == 5);
  CHECK(keyset(c0) == std::set<std::pair<double, double>>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(carve(z, 1.0, 1.0, vec({Complex(0.5, 0.5)})).size() == 4);
  const auto tiny = carve(z, 10.0, 1.0, CVector::Zero(1));
  CHECK(tiny.size() == 1);
  CHECK(std::abs(tiny.codewords[0](0)) == 0.0);
  CHECK(kind_of([&] { carve(scale(z, 2.0), 1.0, 1.0, CVector::Zero(1)); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { carve(z, 0.1, 100.0, CVector::Zero(1), 100); }) == ErrorKind::Overflow);
}

TEST_CASE("rate") {
  const Lattice z = oracle::gaussian_integers();
  CHECK(rate(carve(z, 1.0, 1.0, CVector::Zero(1))) == doctest::Approx(std::log2(5.0)));
  CHECK(rate(carve(z, 10.0, 1.0, CVector::Zero(1))) == 0.0);
  // 16 codewords in k = 2: the 4 x 4 grid alpha * {±1/2, ±3/2}^2 on a square-grid shift
  const auto c16 = carve(oracle::gaussian_integers(2), 1.0, 1.3,
                         vec({Complex(0.5, 0.5), Complex(0.5, 0.5)}));
  CHECK(c16.size() == 16);
  CHECK(rate(c16) == doctest::Approx(2.0));
  FiniteCode empty = carve(z, 1.0, 1.0, CVector::Zero(1));
  empty.codewords.clear();
  CHECK(kind_of([&] { rate(empty); }) == ErrorKind::EmptyCode);
}

TEST_CASE("find_shift examples") {
  const Lattice z = oracle::gaussian_integers();
  const auto s1 = find_shift(z, 1.0, 1.0, 64, 11);
  CHECK(s1.guarantee == doctest::Approx(std::acos(-1.0)));
  CHECK(s1.code.size() >= 4);
  CHECK(s1.guarantee_met);
  const auto s2 = find_shift(z, 2.0, 1.0, 8, 11);
  CHECK(s2.code.size() >= 1);
  CHECK(s2.guarantee_met);
  CHECK(kind_of([&] { find_shift(z, 1.0, 1.0, 0, 1); }) == ErrorKind::InvalidTrials);
}

TEST_CASE("codewords lie in the ball and on the shifted lattice") {
  std::mt19937_64 rng(8);
  const Lattice base = normalize_volume(embed_ring(cyclotomic_field(8)));
  for (int t = 0; t < 5; ++t) {
    const CVector shift = oracle::random_vector(2, rng, 0.3);
    const double alpha = 0.6 + 0.1 * t;
    const auto code = carve(base, alpha, 2.0, shift);
    const RMatrix inv = base.generators().inverse();
    for (const auto& x : code.codewords) {
      CHECK(x.squaredNorm() / 2.0 <= 2.0 + 1e-12);
      const Eigen::VectorXd c = inv.transpose() * to_real((x - shift) / alpha);
      CHECK((c - c.array().round().matrix()).norm() < 1e-9);
    }
  }
}

TEST_CASE("carving is monotone in P") {
  std::mt19937_64 rng(12);
  const Lattice base = normalize_volume(oracle::hexagonal());
  for (int t = 0; t < 10; ++t) {
    const CVector shift = oracle::random_vector(1, rng, 0.5);
    const auto small = carve(base, 0.5, 1.0 + t, shift);
    const auto large = carve(base, 0.5, 1.5 + t, shift);
    const auto big_keys = keyset(large);
    for (const auto& key : keyset(small)) CHECK(big_keys.count(key) == 1);
    CHECK(large.size() >= small.size());
  }
}

TEST_CASE("find_shift is deterministic and matches the serial reference") {
  const Lattice z2 = oracle::gaussian_integers(2);
  const auto a = find_shift(z2, 0.8, 1.5, 32, 99);
  const auto b = find_shift(z2, 0.8, 1.5, 32, 99);
  const auto r = reference::find_shift(z2, 0.8, 1.5, 32, 99);
  CHECK(a.best_trial == b.best_trial);
  CHECK(a.best_trial == r.best_trial);
  CHECK((a.shift - r.shift).norm() == 0.0);
  CHECK(a.code.size() == r.code.size());
  for (std::size_t i = 0; i < a.code.size(); ++i) CHECK((a.code.codewords[i] - r.code.codewords[i]).norm() == 0.0);
}
