#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qnr/blockops.hpp"
#include "qnr/errors.hpp"
#include "qnr/funcalc.hpp"
#include "qnr/qrange.hpp"
#include "qnr/spectral.hpp"

using namespace qnr;

namespace {

const BoundCheckReport& clause(const std::vector<BoundCheckReport>& reps, const std::string& name) {
  for (const auto& r : reps) {
    if (r.clause == name) return r;
  }
  FAIL("missing clause " << name);
  return reps.front();
}

BoundInputs pair(const ComplexMatrix& x, const ComplexMatrix& y, double q) {
  BoundInputs in;
  in.a = x;
  in.b = y;
  in.q = q;
  return in;
}

}  // namespace

TEST_CASE("block constructions") {
  const auto d = ComplexMatrix::diagonal({2, 3});
  const auto t = make_offdiag(d, d).assembled;
  const auto expected = ComplexMatrix::from_rows({{0, 0, 2, 0}, {0, 0, 0, 3}, {2, 0, 0, 0}, {0, 3, 0, 0}});
  CHECK(t == expected);
  CHECK(make_offdiag(ComplexMatrix(2), ComplexMatrix(2)).assembled == ComplexMatrix(4));
  const auto x = ComplexMatrix::from_rows({{1, 2}, {3, 4}});
  const auto s = make_symmetric_pair(x, ComplexMatrix(2)).assembled;
  CHECK(s == assemble_blocks(x, ComplexMatrix(2), ComplexMatrix(2), x));
  CHECK_THROWS_AS(make_offdiag(x, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("closed form on the listed spectra") {
  for (double q : {0.0, 0.4, 1.0}) {
    CHECK(offdiag_hermitian_closed_form(std::vector<double>{3, 2}, q) == doctest::Approx(3.0));
    CHECK(offdiag_hermitian_closed_form(std::vector<double>{3, 1}, q) == doctest::Approx(3.0));
    CHECK(offdiag_hermitian_closed_form(std::vector<double>{-1, -3}, q) == doctest::Approx(3.0));
  }
}

TEST_CASE("closed form agrees with the generic formula on the block spectrum") {
  std::mt19937_64 g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = real_part(oracle::random_matrix(g, 3));
    const auto block = make_offdiag(h, h).assembled;
    for (double q : {0.1, 0.5, 0.9}) {
      const double generic = q_radius_hermitian(hermitian_eigenvalues(block), q);
      const double closed = offdiag_hermitian_closed_form(hermitian_eigen(h), q);
      CHECK(closed == doctest::Approx(generic).epsilon(1e-12));
      CHECK(closed >= q_radius_hermitian(h, q) - 1e-12);
    }
  }
}

TEST_CASE("invariances on the 4x4 example") {
  Evaluator ev;
  const auto d = ComplexMatrix::diagonal({2, 3});
  for (double q : {0.25, 0.75}) {
    const auto reps = check_invariances(d, d, q, {std::numbers::pi}, ev);
    REQUIRE(reps.size() == 2);
    for (const auto& r : reps) {
      CHECK(r.passed);
      CHECK(r.lhs < 2e-6);
    }
  }
}

TEST_CASE("invariances on random pairs") {
  Evaluator ev;
  std::mt19937_64 g(42);
  const auto x = oracle::random_matrix(g, 2), y = oracle::random_matrix(g, 2);
  const auto reps = check_invariances(x, y, 0.5, {std::numbers::pi / 3, std::numbers::pi}, ev);
  CHECK(reps.size() == 3);
  for (const auto& r : reps) CHECK(r.passed);
}

TEST_CASE("K13 equality") {
  Evaluator ev;
  BoundInputs in = pair(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::diagonal({0, 1}), 0.3);
  const auto reps = check_block_bound("K13", in, ev);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].passed);
  CHECK(reps[0].lhs < 1e-6);
  in.a = ComplexMatrix::diagonal({1, -1});
  CHECK_THROWS_AS(check_block_bound("K13", in, ev), Error);
}

TEST_CASE("K6c on a hermitian X") {
  Evaluator ev;
  BoundInputs in;
  in.a = ComplexMatrix::diagonal({2, 3});
  in.q = 0.4;
  const auto reps = check_block_bound("K6", in, ev);
  const auto& lo = clause(reps, "c-lower");
  CHECK(lo.lhs == doctest::Approx(1.2));
  CHECK(lo.rhs == doctest::Approx(3.0));
  CHECK(lo.passed);
  const auto& up = clause(reps, "c-upper");
  CHECK(up.lhs == doctest::Approx(3.0));
  CHECK(up.rhs == doctest::Approx(3.0));
  CHECK(up.passed);
}

TEST_CASE("K5 on diag(2,3)") {
  Evaluator ev;
  const auto d = ComplexMatrix::diagonal({2, 3});
  const auto reps = check_block_bound("K5", pair(d, d, 0.5), ev);
  CHECK(clause(reps, "lower").lhs == doctest::Approx(1.75));
  CHECK(clause(reps, "lower").rhs == doctest::Approx(3.0));
  CHECK(clause(reps, "upper").rhs == doctest::Approx(3.0));
  for (const auto& r : reps) CHECK(r.passed);
}

TEST_CASE("sharpness example with the swap matrix") {
  Evaluator ev;
  const auto x = ComplexMatrix::from_rows({{0, 1}, {1, 0}});
  for (double q : {0.2, 0.7}) {
    CHECK(operator_norm(x) == doctest::Approx(1.0));
    CHECK(q_radius_hermitian(x, q) == doctest::Approx(1.0));
    CHECK(ev.wq(make_offdiag(x, x).assembled, q, true).value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("square-zero construction") {
  std::mt19937_64 g(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_matrix(g, 3);
    const auto z = square_zero_from(x);
    CHECK((z * z).frobenius_norm() < 1e-12 * (1 + z.frobenius_norm() * z.frobenius_norm()));
    CHECK(std::abs(operator_norm(real_part(z)) - operator_norm(imag_part(z))) < 1e-10);
  }
  const auto j = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
  CHECK(square_zero_from(j) == j);
}

TEST_CASE("K7 with square roots dominates the midpoint upper bound") {
  Evaluator ev;
  std::mt19937_64 g(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto gx = oracle::random_matrix(g, 2), gy = oracle::random_matrix(g, 2);
    const auto x = gx.adjoint() * gx, y = gy.adjoint() * gy;
    BoundInputs in = pair(x, y, 0.6);
    in.gamma = 0.5;
    const auto k7 = clause(check_block_bound("K7", in, ev), "power-gamma");
    const auto k5 = clause(check_block_bound("K5", in, ev), "upper");
    CHECK(k7.passed);
    MESSAGE("K7 rhs " << k7.rhs << " vs K5 rhs " << k5.rhs);
  }
}

TEST_CASE("K7 lambda minimization matches a dense scan") {
  Evaluator ev;
  const auto x = ComplexMatrix::from_rows({{2, 1}, {1, 1}});
  const auto y = ComplexMatrix::from_rows({{1, 0}, {0, 3}});
  BoundInputs in = pair(x, y, 0.5);
  in.gamma = 0.5;
  const double rhs = clause(check_block_bound("K7", in, ev), "power-gamma").rhs;
  // with f = g = sqrt: g^2(|X^*|) = |X^*|, g^2(|Y^*|) = |Y^*| and f^2 = |.|
  const auto axs = matrix_abs(x.adjoint()), ays = matrix_abs(y.adjoint());
  const auto ax = matrix_abs(x), ay = matrix_abs(y);
  const double q = 0.5, s = std::sqrt(1 - q * q);
  const double first = 0.5 * std::max(operator_norm(ay + q * q * axs), operator_norm(ax + q * q * ays));
  const double second = (1 - q * q) / 2 * std::max(operator_norm(axs), operator_norm(ays));
  auto phi = [&](double l) {
    auto shift = [&](const ComplexMatrix& m) { return operator_norm(m - l * ComplexMatrix::identity(2)); };
    return std::max(shift(axs), shift(ays));
  };
  double third = 1e300, at = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double l = 5.0 * k / 20000;
    if (phi(l) < third) third = phi(l), at = l;
  }
  for (int k = -20000; k <= 20000; ++k) third = std::min(third, phi(std::max(0.0, at + 2.5e-4 * k / 20000)));
  CHECK(rhs == doctest::Approx(first + second + q * s * third).epsilon(1e-7));
}

TEST_CASE("block checks pass on sectorial samples where the statements hold") {
  Evaluator ev;
  std::mt19937_64 g(45);
  for (int trial = 0; trial < 3; ++trial) {
    const auto x = oracle::random_matrix(g, 2), y = oracle::random_matrix(g, 2);
    for (const char* id : {"K1", "K2", "K4", "K5", "K9", "K10", "K11", "K14"}) {
      for (const auto& r : check_block_bound(id, pair(x, y, 0.5), ev)) {
        CAPTURE(id);
        CAPTURE(r.clause);
        CHECK(r.status != CheckStatus::Fail);
      }
    }
  }
}

TEST_CASE("K6b as stated fails on the identity at q = 1") {
  Evaluator ev;
  BoundInputs in;
  in.a = ComplexMatrix::identity(2);
  in.q = 1.0;
  const auto reps = check_block_bound("K6", in, ev);
  // w(I) = 1 but (0 I; 0 0) has numerical radius 1/2
  const auto& b = clause(reps, "b-lower");
  CHECK(b.lhs == doctest::Approx(1.0));
  CHECK(b.rhs == doctest::Approx(0.5));
  CHECK_FALSE(b.passed);
  CHECK(clause(reps, "b-lower-halved").passed);
  CHECK(clause(reps, "b-upper").passed);
}

TEST_CASE("K3 closed form against the estimator") {
  Evaluator ev;
  BoundInputs in;
  in.a = ComplexMatrix::diagonal({2, -1});
  in.q = 0.3;
  const auto reps = check_block_bound("K3", in, ev);
  for (const auto& r : reps) CHECK(r.passed);
}

TEST_CASE("unknown and incomplete requests") {
  Evaluator ev;
  BoundInputs in;
  in.a = ComplexMatrix::identity(2);
  CHECK_THROWS_AS(check_block_bound("K99", in, ev), Error);
  try {
    check_block_bound("K4", in, ev);
    FAIL("expected PreconditionFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionFailed);
  }
}
