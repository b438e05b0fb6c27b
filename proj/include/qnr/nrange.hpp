#pragma once

#include <vector>

#include "qnr/matrix.hpp"
#include "qnr/tolerances.hpp"

namespace qnr {

inline constexpr int kDefaultThetaGrid = 720;

struct NumericalRadius {
  double value = 0.0;
  double theta = 0.0;  // maximizing rotation
  Vector witness;      // unit x with |<Ax, x>| = value (up to eigensolver accuracy)
};

/// w(A) = max_theta lambda_max(R(e^{i theta} A)) on a theta grid, refined by
/// golden-section search. Ties resolve to the smallest theta. grid >= 64.
NumericalRadius numerical_radius_witness(const ComplexMatrix& a, int grid = kDefaultThetaGrid);
double numerical_radius(const ComplexMatrix& a, int grid = kDefaultThetaGrid);

/// lambda_max(R(e^{i theta} A)).
double support_value(const ComplexMatrix& a, double theta, const Tolerances& tol = {});

struct SectorCertificate {
  double alpha = 0.0;
  Vector witness_x;
  bool positive_real_part = true;
};

/// Least alpha with W(A) inside S_alpha, via tan(alpha) = ||R^{-1/2} I R^{-1/2}||.
/// Throws NotAccretive when lambda_min(R(A)) <= psd_tol.
SectorCertificate sector_angle(const ComplexMatrix& a, const Tolerances& tol = {});

/// lambda_min(tan(alpha + eps) R(A) +- I(A)) >= -psd_tol and the witness has
/// positive real quadratic form.
bool verify_sector_certificate(const ComplexMatrix& a, const SectorCertificate& cert,
                               double eps = 1e-6, const Tolerances& tol = {});

bool is_sectorial(const ComplexMatrix& a, double alpha, const Tolerances& tol = {});
bool is_accretive(const ComplexMatrix& a, const Tolerances& tol = {});
bool is_accretive_dissipative(const ComplexMatrix& a, const Tolerances& tol = {});
/// |w(A) - ||A||| <= cmp_tol (1 + ||A||)
bool is_normaloid(const ComplexMatrix& a, const Tolerances& tol = {});

struct RangeBoundary {
  std::vector<double> thetas;
  std::vector<double> support_values;
  std::vector<cplx> boundary_points;
};

/// Points <A x_theta, x_theta> for the top eigenvectors of R(e^{i theta} A).
RangeBoundary range_boundary(const ComplexMatrix& a, int grid = kDefaultThetaGrid);

}  // namespace qnr
