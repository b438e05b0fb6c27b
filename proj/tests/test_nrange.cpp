#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qnr/errors.hpp"
#include "qnr/io.hpp"
#include "qnr/nrange.hpp"
#include "qnr/spectral.hpp"

using namespace qnr;

TEST_CASE("numerical radius matches the elliptical range") {
  std::mt19937_64 g(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = oracle::random_matrix(g, 2);
    CHECK(numerical_radius(a) == doctest::Approx(oracle::numerical_radius2(a)).epsilon(1e-8));
  }
}

TEST_CASE("numerical radius of simple matrices") {
  CHECK(numerical_radius(ComplexMatrix::from_rows({{0, 1}, {0, 0}})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(numerical_radius(ComplexMatrix::diagonal({5, 4})) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(numerical_radius(ComplexMatrix::diagonal({{0, 3}, -1})) == doctest::Approx(3.0).epsilon(1e-12));
  const auto nr = numerical_radius_witness(ComplexMatrix::from_rows({{1, 2}, {0, {0, 1}}}));
  const auto ax = ComplexMatrix::from_rows({{1, 2}, {0, {0, 1}}}) * nr.witness;
  CHECK(std::abs(inner(ax, nr.witness)) == doctest::Approx(nr.value).epsilon(1e-9));
  CHECK_THROWS_AS(numerical_radius(ComplexMatrix::identity(2), 10), Error);
}

TEST_CASE("w lies between half the norm and the norm") {
  std::mt19937_64 g(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_matrix(g, 4);
    const double w = numerical_radius(a), nrm = operator_norm(a);
    CHECK(w <= nrm * (1 + 1e-12));
    CHECK(w >= 0.5 * nrm * (1 - 1e-12));
    CHECK(w >= spectral_radius(a) * (1 - 1e-9));
  }
}

TEST_CASE("sector angle of normal matrices is the largest eigenvalue argument") {
  const double t1 = 0.3, t2 = -0.9;
  const auto a = ComplexMatrix::diagonal({std::polar(2.0, t1), std::polar(0.5, t2), 1.0});
  const auto cert = sector_angle(a);
  CHECK(cert.alpha == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(verify_sector_certificate(a, cert));
  CHECK(is_sectorial(a, 0.9));
  CHECK_FALSE(is_sectorial(a, 0.8));
  CHECK(sector_angle(ComplexMatrix::diagonal({1, 3})).alpha == doctest::Approx(0.0));
}

TEST_CASE("sector angle of a non-normal matrix agrees with the boundary of W(A)") {
  const auto a = ComplexMatrix::from_rows({{2, {0.5, 1}, 0}, {{0, 0.2}, {3, 1}, 0.5}, {0, 0.3, {1.5, -0.5}}});
  const auto cert = sector_angle(a);
  const auto rb = range_boundary(a, 20000);
  double worst = 0.0;
  for (const auto& z : rb.boundary_points) worst = std::max(worst, std::abs(std::arg(z)));
  CHECK(cert.alpha == doctest::Approx(worst).epsilon(1e-6));
  CHECK(verify_sector_certificate(a, cert));
}

TEST_CASE("non accretive input") {
  try {
    sector_angle(ComplexMatrix::from_rows({{0, 1}, {0, 0}}));
    FAIL("expected NotAccretive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAccretive);
  }
  CHECK_FALSE(is_accretive(ComplexMatrix::diagonal({1, -1})));
  CHECK(is_accretive_dissipative(ComplexMatrix::diagonal({{1, 1}, {2, 3}})));
  CHECK_FALSE(is_accretive_dissipative(ComplexMatrix::diagonal({{1, 1}, {2, -3}})));
}

TEST_CASE("normaloid predicate") {
  CHECK(is_normaloid(ComplexMatrix::diagonal({5, 4})));
  CHECK_FALSE(is_normaloid(ComplexMatrix::from_rows({{0, 1}, {0, 0}})));
}

TEST_CASE("support function and boundary") {
  const auto a = ComplexMatrix::diagonal({{1, 2}, {-3, 0}});
  CHECK(support_value(a, 0.0) == doctest::Approx(1.0));
  CHECK(support_value(a, std::numbers::pi) == doctest::Approx(3.0));
  const auto rb = range_boundary(a, 64);
  CHECK(rb.thetas.size() == 64);
  CHECK(rb.boundary_points.size() == 64);
  const std::string csv = range_boundary_csv(rb);
  CHECK(csv.rfind("theta,re,im,support_value\n", 0) == 0);
  for (std::size_t k = 0; k < rb.thetas.size(); ++k) {
    const cplx e = std::polar(1.0, rb.thetas[k]);
    CHECK((e * rb.boundary_points[k]).real() == doctest::Approx(rb.support_values[k]).epsilon(1e-9));
  }
}

TEST_CASE("svg output has one polyline per series and axis labels") {
  const std::string svg = render_svg({{"a", {0, 1, 2}, {0, 1, 4}}, {"b", {0, 1}, {1, 1}}}, "q", "f", false);
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) ++count, ++pos;
  CHECK(count == 2);
  CHECK(svg.find(">q<") != std::string::npos);
  CHECK(svg.find(">f<") != std::string::npos);
}
