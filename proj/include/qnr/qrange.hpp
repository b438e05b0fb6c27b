#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qnr/matrix.hpp"
#include "qnr/spectral.hpp"
#include "qnr/tolerances.hpp"

namespace qnr {

/// Throws InvalidInput unless q is finite with |q| <= 1.
void validate_q(cplx q);

/// (|q|/2)|lambda_1 + lambda_n| + (1/2)|lambda_1 - lambda_n|.
double q_radius_hermitian(const HermitianSpectrum& spectrum, cplx q);
double q_radius_hermitian(const std::vector<double>& eigenvalues, cplx q);
/// Convenience overload; A must be hermitian.
double q_radius_hermitian(const ComplexMatrix& a, cplx q, const Tolerances& tol = {});

struct QObjective {
  double value = 0.0;
  Vector z;  // unit, orthogonal to x; empty when |q| = 1
};

/// Best |<Ax, y>| over unit y with <x, y> = q, for a fixed unit x:
///   |q| |<Ax,x>| + sqrt(1 - |q|^2) sqrt(||Ax||^2 - |<Ax,x>|^2).
/// Throws DimensionTooSmall when n = 1 and |q| < 1.
QObjective q_objective(const ComplexMatrix& a, cplx q, std::span<const cplx> x);

/// y = conj(q) x + sqrt(1 - |q|^2) z
Vector q_partner(std::span<const cplx> x, std::span<const cplx> z, cplx q);

struct QEstimateOptions {
  int restarts = 0;  // 0 selects 32 n
  std::uint64_t seed = 42;
  Tolerances tol{};
  int max_iterations = 400;
  std::optional<Vector> warm_start;
};

struct QRadiusEstimate {
  double value = 0.0;
  cplx q = 0.0;
  Vector witness_x;
  std::optional<Vector> witness_z;
  int restarts_used = 0;
  bool converged = false;
};

/// Multi-start ascent of q_objective over the unit sphere. The reported value
/// is |<A x, y>| for the returned witness pair, hence a lower bound on w_q(A).
QRadiusEstimate q_radius_estimate(const ComplexMatrix& a, cplx q,
                                  const QEstimateOptions& opts = {});

/// Lattice search over x = (cos t, e^{i phi} sin t) followed by a zoom around
/// the best lattice cells. n must be 2.
double q_radius_bruteforce_2x2(const ComplexMatrix& a, cplx q, int grid = 500);

/// Random points <Ax, y> of W_q(A).
std::vector<cplx> q_range_sample(const ComplexMatrix& a, cplx q, int samples,
                                 std::uint64_t seed);

/// sup_{|x|=1} sqrt(||Tx||^2 - |<Tx,x>|^2)
double transcendental_radius_sup(const ComplexMatrix& t, int restarts = 0,
                                 std::uint64_t seed = 42);
/// min over complex lambda of ||T - lambda I|| (Nelder-Mead from trace/n).
double transcendental_radius_inf(const ComplexMatrix& t);

}  // namespace qnr
