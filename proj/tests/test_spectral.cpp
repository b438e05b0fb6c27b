#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qnr/errors.hpp"
#include "qnr/funcalc.hpp"
#include "qnr/spectral.hpp"

using namespace qnr;

TEST_CASE("Jacobi eigenvalues match the cubic formula") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = real_part(oracle::random_matrix(g, 3));
    const auto ref = oracle::hermitian3_eigenvalues(h);
    const auto ev = hermitian_eigenvalues(h);
    REQUIRE(ev.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(ev[k] == doctest::Approx(ref[k]).epsilon(1e-10));
  }
}

TEST_CASE("hermitian eigenvectors reconstruct the matrix") {
  std::mt19937_64 g(12);
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const auto h = real_part(oracle::random_matrix(g, n));
    const auto s = hermitian_eigen(h);
    std::vector<double> d = s.eigenvalues;
    CHECK(std::is_sorted(d.rbegin(), d.rend()));
    const auto lam = ComplexMatrix::real_diagonal(d);
    CHECK(oracle::diff(s.eigenvectors * lam * s.eigenvectors.adjoint(), h) < 1e-11 * (1 + h.frobenius_norm()));
    CHECK(oracle::diff(s.eigenvectors.adjoint() * s.eigenvectors, ComplexMatrix::identity(n)) < 1e-12);
  }
}

TEST_CASE("non-hermitian input is rejected by the Jacobi path") {
  const auto a = ComplexMatrix::from_rows({{1, 2}, {0, 1}});
  try {
    hermitian_eigen(a);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("general eigenvalues match the quadratic formula") {
  std::mt19937_64 g(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_matrix(g, 2);
    const auto ref = oracle::eigen2(a);
    const auto ge = general_eigen(a);
    for (const cplx& r : ref) {
      double best = 1e300;
      for (const cplx& l : ge.eigenvalues) best = std::min(best, std::abs(l - r));
      CHECK(best < 1e-10 * (1 + std::abs(r)));
    }
  }
}

TEST_CASE("general eigenvectors diagonalize") {
  std::mt19937_64 g(14);
  for (std::size_t n : {3u, 6u, 10u}) {
    const auto a = oracle::random_matrix(g, n);
    const auto ge = require_diagonalizable(a);
    const auto& v = *ge.eigenvectors;
    const auto lam = ComplexMatrix::diagonal(ge.eigenvalues);
    CHECK(oracle::diff(v * lam * inverse(v), a) < 1e-9 * a.frobenius_norm());
    cplx sum = 0;
    for (auto l : ge.eigenvalues) sum += l;
    CHECK(std::abs(sum - a.trace()) < 1e-10 * (1 + a.frobenius_norm()));
  }
}

TEST_CASE("Jordan block is flagged defective") {
  const auto j = ComplexMatrix::from_rows({{1, 1}, {0, 1}});
  const auto ge = general_eigen(j);
  CHECK(ge.defective);
  try {
    require_diagonalizable(j);
    FAIL("expected Defective");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Defective);
  }
}

TEST_CASE("operator norm and spectral radius") {
  std::mt19937_64 g(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_matrix(g, 2);
    CHECK(operator_norm(a) == doctest::Approx(oracle::norm2(a)).epsilon(1e-11));
    const auto l = oracle::eigen2(a);
    CHECK(spectral_radius(a) == doctest::Approx(std::max(std::abs(l[0]), std::abs(l[1]))).epsilon(1e-10));
  }
  CHECK(operator_norm(ComplexMatrix::from_rows({{0, 1}, {0, 0}})) == doctest::Approx(1.0));
  CHECK(spectral_radius(ComplexMatrix::from_rows({{0, 1}, {0, 0}})) < 1e-7);
}

TEST_CASE("Loewner order") {
  const auto b = ComplexMatrix::diagonal({2, 3}), c = ComplexMatrix::diagonal({1, 3});
  CHECK(loewner_geq(b, c, 1e-9));
  CHECK_FALSE(loewner_geq(c, b, 1e-9));
  CHECK(loewner_margin(b, c) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(loewner_geq(b, ComplexMatrix::identity(3), 1e-9), Error);
}

TEST_CASE("inverse") {
  std::mt19937_64 g(16);
  const auto a = oracle::random_matrix(g, 5);
  CHECK(oracle::diff(a * inverse(a), ComplexMatrix::identity(5)) < 1e-11);
  CHECK_THROWS_AS(inverse(ComplexMatrix::from_rows({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("principal powers") {
  const auto a = ComplexMatrix::from_rows({{2, {0, 1}}, {0.5, 3}});
  const auto h = principal_power(a, 0.5);
  CHECK(oracle::diff(h * h, a) < 1e-10);
  CHECK(oracle::diff(principal_power(a, -1.0) * a, ComplexMatrix::identity(2)) < 1e-10);
  CHECK(principal_power(a, 1.0) == a);
  // positive definite: sqrt through Jacobi
  const auto p = ComplexMatrix::from_rows({{4, 0}, {0, 9}});
  CHECK(oracle::diff(principal_power(p, 0.5), ComplexMatrix::diagonal({2, 3})) < 1e-13);
  // Re lambda <= 0
  try {
    principal_power(ComplexMatrix::diagonal({-1, 2}), 0.5);
    FAIL("expected SpectrumNotSectorial");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpectrumNotSectorial);
  }
  try {
    principal_power(ComplexMatrix::from_rows({{1, 1}, {0, 1}}), 0.5);
    FAIL("expected Defective");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Defective);
  }
  CHECK_THROWS_AS(principal_power(a, 1.5), Error);
}

TEST_CASE("matrix modulus and spectral functions") {
  std::mt19937_64 g(17);
  const auto x = oracle::random_matrix(g, 4);
  const auto m = matrix_abs(x);
  CHECK(oracle::diff(m * m, x.adjoint() * x) < 1e-10 * (1 + x.frobenius_norm() * x.frobenius_norm()));
  const auto d = ComplexMatrix::diagonal({0, 1, 3});
  CHECK(oracle::diff(apply_spectral_function(d, SpectralFunction::ratio()), ComplexMatrix::diagonal({0, 0.5, 0.75})) < 1e-14);
  CHECK(oracle::diff(apply_spectral_function(d, SpectralFunction::shift()), ComplexMatrix::diagonal({1, 2, 4})) < 1e-14);
  CHECK(oracle::diff(apply_spectral_function(d, SpectralFunction::power(0.0)), ComplexMatrix::identity(3)) < 1e-14);
  CHECK(oracle::diff(apply_spectral_function(d, SpectralFunction::square()), ComplexMatrix::diagonal({0, 1, 9})) < 1e-13);
  try {
    apply_spectral_function(ComplexMatrix::diagonal({-1, 1}), SpectralFunction::power(0.5));
    FAIL("expected NegativeSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeSpectrum);
  }
  // tiny negative eigenvalues are clamped
  CHECK_NOTHROW(apply_spectral_function(ComplexMatrix::diagonal({-1e-12, 1}), SpectralFunction::power(0.5)));
}
