#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latfade/error.hpp"
#include "latfade/forms.hpp"
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

CVector ones(int k) { return CVector::Ones(k); }

std::vector<HomogeneousForm> all_forms() {
  return {make_form(FormKind::euclidean_sq, 4), make_form(FormKind::product_sq, 4),
          make_form(FormKind::block_product_sq, 4, 2), make_form(FormKind::mimo_det2, 4),
          make_form(FormKind::mimo_det2, 4, 1, Det2Layout::channel)};
}

}  // namespace

TEST_CASE("evaluate examples") {
  CHECK(evaluate(make_form(FormKind::product_sq, 4), ones(4)) == doctest::Approx(4.0));
  CHECK(evaluate(make_form(FormKind::block_product_sq, 4, 2), ones(4)) == doctest::Approx(4.0));
  CHECK(evaluate(make_form(FormKind::mimo_det2, 4), ones(4)) == 0.0);
  CHECK(evaluate(make_form(FormKind::euclidean_sq, 2), vec({3.0, Complex(0, 4)})) == doctest::Approx(25.0));
  CHECK(kind_of([] { evaluate(make_form(FormKind::euclidean_sq, 2), ones(3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("form validation") {
  CHECK(kind_of([] { make_form(FormKind::block_product_sq, 4, 3); }) == ErrorKind::BlockMismatch);
  CHECK(kind_of([] { make_form(FormKind::mimo_det2, 6); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { form_of(make_group(GroupKind::mimo2_block, 8)); }) == ErrorKind::UnsupportedGroup);
}

TEST_CASE("mimo layouts") {
  const CVector x = vec({2.0, 3.0, 5.0, 7.0});
  CHECK(evaluate(make_form(FormKind::mimo_det2, 4), x) == doctest::Approx(2.0 * std::abs(2.0 * 3.0 - 5.0 * 7.0)));
  CHECK(evaluate(make_form(FormKind::mimo_det2, 4, 1, Det2Layout::channel), x) ==
        doctest::Approx(2.0 * std::abs(2.0 * 7.0 - 3.0 * 5.0)));
}

TEST_CASE("closed-form reduced norms") {
  CHECK(reduced_norm_sq_closed_form(make_group(GroupKind::diagonal, 2), vec({2.0, 0.5})) == doctest::Approx(2.0));
  const CVector x = vec({Complex(1, 2), Complex(-0.5, 3)});
  CHECK(reduced_norm_sq_closed_form(make_group(GroupKind::identity, 2), x) == doctest::Approx(x.squaredNorm()));
  CHECK(reduced_norm_sq_closed_form(make_group(GroupKind::mimo2_block, 4), vec({1.0, 1.0, 0.0, 0.0})) ==
        doctest::Approx(2.0));
}

TEST_CASE("numeric oracle examples") {
  CHECK(reduced_norm_sq_numeric(make_group(GroupKind::diagonal, 2), vec({2.0, 0.5}), 200) ==
        doctest::Approx(2.0).epsilon(1e-4));
  CHECK(reduced_norm_sq_numeric(make_group(GroupKind::identity, 2), ones(2), 10) == 2.0);
  CHECK(reduced_norm_sq_numeric(make_group(GroupKind::mimo2_block, 4), ones(4), 200) < 1e-3);
  CHECK(kind_of([] { reduced_norm_sq_numeric(make_group(GroupKind::diagonal, 2), CVector::Zero(2), 10); }) ==
        ErrorKind::ZeroVector);
}

TEST_CASE("numeric oracle matches the serial reference") {
  std::mt19937_64 rng(17);
  for (const auto& g : {make_group(GroupKind::diagonal, 4), make_group(GroupKind::block_diagonal, 4, 2),
                        make_group(GroupKind::mimo2_block, 4)}) {
    const CVector x = oracle::random_vector(4, rng);
    NumericOptions opt;
    opt.restarts = 16;
    CHECK(reduced_norm_sq_numeric(g, x, 100, opt) == reference::reduced_norm_sq_numeric(g, x, 100, opt));
  }
}

TEST_CASE("homogeneity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(-5.0, 5.0);
  for (const auto& f : all_forms()) {
    CHECK(evaluate(f, CVector::Zero(4)) == 0.0);
    for (int t = 0; t < 1000; ++t) {
      const CVector x = oracle::random_vector(4, rng);
      const double a = scale(rng);
      const double fx = evaluate(f, x);
      CHECK(fx >= 0.0);
      CHECK(std::abs(evaluate(f, a * x) - a * a * fx) <= 1e-9 * (1.0 + fx) * std::max(1.0, a * a));
    }
  }
}

TEST_CASE("group invariance of the closed forms") {
  std::mt19937_64 rng(2);
  for (const auto& g : {make_group(GroupKind::diagonal, 6), make_group(GroupKind::block_diagonal, 6, 2),
                        make_group(GroupKind::block_diagonal, 6, 3), make_group(GroupKind::mimo2_block, 4),
                        make_group(GroupKind::mimo2_block, 4, 1, Det2Layout::channel)}) {
    for (int t = 0; t < 200; ++t) {
      const CMatrix a = sample_group_member(g, rng);
      CHECK(std::abs(std::abs(a.determinant()) - 1.0) <= 1e-9);
      const CVector x = oracle::random_vector(g.k, rng);
      const double before = reduced_norm_sq_closed_form(g, x);
      CHECK(std::abs(reduced_norm_sq_closed_form(g, a * x) - before) <= 1e-8 * (1.0 + before));
      CHECK((a * x).squaredNorm() >= before * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("AM-GM ordering") {
  std::mt19937_64 rng(4);
  const auto prod = make_form(FormKind::product_sq, 3);
  const auto eucl = make_form(FormKind::euclidean_sq, 3);
  for (int t = 0; t < 1000; ++t) {
    const CVector x = oracle::random_vector(3, rng);
    CHECK(evaluate(prod, x) <= evaluate(eucl, x) * (1.0 + 1e-12));
  }
  const CVector equal = vec({Complex(0, 2), 2.0, Complex(std::sqrt(2.0), std::sqrt(2.0))});
  CHECK(evaluate(prod, equal) == doctest::Approx(evaluate(eucl, equal)).epsilon(1e-12));
}

TEST_CASE("homogeneous_minimum") {
  const Lattice z = oracle::gaussian_integers();
  const auto e = homogeneous_minimum(make_form(FormKind::euclidean_sq, 1), z, 2.0);
  CHECK(e.value == doctest::Approx(1.0));
  CHECK(e.certified);
  CHECK(std::abs(e.achiever.embedding(0) - Complex(1, 0)) < 1e-12);

  const Lattice ring = embed_ring(cyclotomic_field(8));
  const auto p = homogeneous_minimum(make_form(FormKind::product_sq, 2), ring, 3.0, 2.0);
  CHECK(p.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.certified);
  CHECK((p.achiever.embedding - ones(2)).norm() < 1e-12);
  CHECK_FALSE(homogeneous_minimum(make_form(FormKind::product_sq, 2), ring, 3.0).certified);

  const Lattice z4 = oracle::gaussian_integers(4);
  const auto m = homogeneous_minimum(make_form(FormKind::mimo_det2, 4), z4, 2.5);
  CHECK(m.value == 0.0);
  CHECK_FALSE(m.certified);

  CHECK(kind_of([&] { homogeneous_minimum(make_form(FormKind::euclidean_sq, 1), z, 0.01); }) ==
        ErrorKind::EmptySearch);
  CHECK(kind_of([&] { homogeneous_minimum(make_form(FormKind::product_sq, 2), ring, 3.0, 5.0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("reduced_hermite_invariant") {
  CHECK(reduced_hermite_invariant(make_group(GroupKind::identity, 1), oracle::gaussian_integers(), 2.0).value ==
        doctest::Approx(1.0));
  const Lattice ring = embed_ring(cyclotomic_field(8));
  const auto diag = make_group(GroupKind::diagonal, 2);
  const auto rh = reduced_hermite_invariant(diag, ring, 3.0, 2.0);
  CHECK(rh.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rh.certified);
  for (double c : {0.5, 3.0}) {
    const auto s = reduced_hermite_invariant(diag, scale(ring, c), 3.0 * c, 2.0 * c * c);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.certified);
  }
}

TEST_CASE("rh equals k Nd^(2/k) on certified algebraic lattices") {
  for (int n : {3, 4, 5, 8, 12}) {
    const auto field = cyclotomic_field(n);
    const Lattice ring = embed_ring(field);
    const int k = field.k;
    const double r = 1.2 * std::sqrt(static_cast<double>(k));
    const auto rh = reduced_hermite_invariant(make_group(GroupKind::diagonal, k), ring, r, k);
    const auto nd = normalized_product_distance(ring, r, 1.0);
    REQUIRE(rh.certified);
    REQUIRE(nd.certified);
    CHECK(oracle::rel(rh.value, k * std::pow(nd.value, 2.0 / k)) <= 1e-8);
  }
}
