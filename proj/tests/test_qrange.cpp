#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qnr/errors.hpp"
#include "qnr/nrange.hpp"
#include "qnr/spectral.hpp"
#include "qnr/qrange.hpp"

using namespace qnr;

TEST_CASE("q validation") {
  CHECK_THROWS_AS(validate_q(cplx(1.1, 0)), Error);
  CHECK_THROWS_AS(validate_q(cplx(std::nan(""), 0)), Error);
  CHECK_NOTHROW(validate_q(cplx(0.6, 0.8)));
}

TEST_CASE("hermitian closed form") {
  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(q_radius_hermitian(ComplexMatrix::diagonal({5, 4}), q) == doctest::Approx((9 * q + 1) / 2));
    CHECK(q_radius_hermitian(ComplexMatrix::diagonal({1, 2}), q) == doctest::Approx((3 * q + 1) / 2));
    // indefinite: endpoints 2 and -3
    CHECK(q_radius_hermitian(std::vector<double>{2, 0, -3}, q) ==
          doctest::Approx(q * 0.5 + 2.5));
  }
  // depends on |q| only
  CHECK(q_radius_hermitian(ComplexMatrix::diagonal({5, 4}), cplx(0, 0.5)) == doctest::Approx(2.75));
}

TEST_CASE("estimator agrees with the hermitian closed form") {
  std::mt19937_64 g(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = real_part(oracle::random_matrix(g, 3));
    for (double q : {0.2, 0.6, 0.9}) {
      const auto est = q_radius_estimate(h, q);
      CHECK(est.value == doctest::Approx(q_radius_hermitian(h, q)).epsilon(1e-7));
    }
  }
}

TEST_CASE("nilpotent closed form") {
  const auto j = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
  for (double q : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const double ref = (1 + std::sqrt(1 - q * q)) / 2;
    CHECK(q_radius_estimate(j, q).value == doctest::Approx(ref).epsilon(1e-9));
    CHECK(q_radius_bruteforce_2x2(j, q) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("estimate is certified by its witness pair") {
  std::mt19937_64 g(32);
  const auto a = oracle::random_matrix(g, 4);
  const cplx q(0.3, 0.4);
  const auto est = q_radius_estimate(a, q);
  REQUIRE(est.witness_z);
  const Vector y = q_partner(est.witness_x, *est.witness_z, q);
  CHECK(norm(est.witness_x) == doctest::Approx(1.0));
  CHECK(norm(y) == doctest::Approx(1.0));
  CHECK(std::abs(inner(est.witness_x, y) - q) < 1e-12);
  CHECK(std::abs(inner(a * est.witness_x, y)) == doctest::Approx(est.value).epsilon(1e-12));
}

TEST_CASE("estimator against a direct 2x2 search") {
  std::mt19937_64 g(33);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = oracle::random_matrix(g, 2);
    for (double q : {0.3, 0.7}) {
      const double grid = oracle::wq2_grid(a, q, 60);
      const double est = q_radius_estimate(a, q).value;
      const double brute = q_radius_bruteforce_2x2(a, q);
      CHECK(est >= grid - 1e-9);
      CHECK(est <= brute + 1e-6);
      CHECK(std::abs(est - brute) < 1e-6);
    }
  }
}

TEST_CASE("q = 1 reduces to the numerical radius, q = 0 to the norm bounds") {
  std::mt19937_64 g(34);
  const auto a = oracle::random_matrix(g, 3);
  CHECK(q_radius_estimate(a, 1.0).value == doctest::Approx(numerical_radius(a)).epsilon(1e-9));
  const double w0 = q_radius_estimate(a, 0.0).value;
  CHECK(w0 <= operator_norm(a) * (1 + 1e-12));
  // w_0(A) = sup sqrt(||Ax||^2 - |<Ax,x>|^2) = m(A)
  CHECK(w0 == doctest::Approx(transcendental_radius_inf(a)).epsilon(1e-6));
}

TEST_CASE("sampled q-range stays inside the estimated radius") {
  const auto a = ComplexMatrix::from_rows({{1, {0, 2}}, {0.5, -1}});
  const double w = q_radius_estimate(a, 0.4).value;
  for (const cplx& z : q_range_sample(a, 0.4, 2000, 5)) CHECK(std::abs(z) <= w + 1e-9);
  CHECK(q_range_sample(a, 0.4, 10, 5) == q_range_sample(a, 0.4, 10, 5));
}

TEST_CASE("estimator errors and determinism") {
  CHECK_THROWS_AS(q_radius_estimate(ComplexMatrix::identity(1), 0.5), Error);
  CHECK_THROWS_AS(q_radius_bruteforce_2x2(ComplexMatrix::identity(3), 0.5), Error);
  std::mt19937_64 g(35);
  const auto a = oracle::random_matrix(g, 3);
  QEstimateOptions o;
  o.seed = 9;
  CHECK(q_radius_estimate(a, 0.5, o).value == q_radius_estimate(a, 0.5, o).value);
}

TEST_CASE("transcendental radius") {
  CHECK(transcendental_radius_sup(ComplexMatrix::diagonal({5, 4})) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(transcendental_radius_inf(ComplexMatrix::diagonal({5, 4})) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(transcendental_radius_sup(ComplexMatrix::from_rows({{0, 1}, {0, 0}})) == doctest::Approx(1.0).epsilon(1e-9));
  // normal matrix: radius of the smallest disc around the spectrum
  const auto d = ComplexMatrix::diagonal({-1, 3, {1, 1}});
  CHECK(transcendental_radius_sup(d) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(transcendental_radius_inf(d) == doctest::Approx(2.0).epsilon(1e-7));
  std::mt19937_64 g(36);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = oracle::random_matrix(g, 3);
    CHECK(std::abs(transcendental_radius_sup(a) - transcendental_radius_inf(a)) <= 1e-5 * (1 + operator_norm(a)));
  }
}

TEST_CASE("scalar matrices: w_q(cI) = |c| |q|") {
  for (double q : {0.0, 0.1, 0.5, 0.9}) {
    for (cplx c : {cplx(2, 0), cplx(0, -3)}) {
      const auto m = ComplexMatrix::identity(3) * c;
      const auto est = q_radius_estimate(m, q);
      CHECK(est.value == doctest::Approx(std::abs(c) * q).epsilon(1e-12));
      REQUIRE(est.witness_z);
      const Vector y = q_partner(est.witness_x, *est.witness_z, q);
      CHECK(norm(y) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(inner(est.witness_x, y) - cplx(q)) < 1e-12);
    }
  }
}

TEST_CASE("partner direction stays orthogonal when Ax is parallel to x") {
  const auto m = ComplexMatrix::diagonal({2, 2, 1});
  const Vector x{1.0, 0.0, 0.0};
  const auto obj = q_objective(m, 0.4, x);
  CHECK(norm(obj.z) == doctest::Approx(1.0));
  CHECK(std::abs(inner(obj.z, x)) < 1e-15);
  CHECK(obj.value == doctest::Approx(0.8));
}
