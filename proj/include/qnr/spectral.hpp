#pragma once

#include <optional>
#include <vector>

#include "qnr/matrix.hpp"
#include "qnr/tolerances.hpp"

namespace qnr {

/// Eigen-decomposition of a hermitian matrix: A = U diag(eigenvalues) U^*.
/// Eigenvalues are sorted descending; ties keep the original diagonal order.
struct HermitianSpectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;  // columns

  double largest() const { return eigenvalues.front(); }
  double smallest() const { return eigenvalues.back(); }
};

/// Cyclic complex Jacobi. Throws NotHermitian if ||A - A^*|| > eig_tol (1 + ||A||).
HermitianSpectrum hermitian_eigen(const ComplexMatrix& a, const Tolerances& tol = {});
/// Eigenvalues only, descending. Same preconditions as hermitian_eigen.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, const Tolerances& tol = {});
/// Largest eigenvalue and a unit eigenvector for it.
std::pair<double, Vector> hermitian_top_eigenpair(const ComplexMatrix& a,
                                                  const Tolerances& tol = {});

struct GeneralEigen {
  std::vector<cplx> eigenvalues;
  /// Unit-norm eigenvectors as columns; absent when the basis is numerically singular.
  std::optional<ComplexMatrix> eigenvectors;
  /// 2-norm condition number of the eigenvector matrix (infinity if singular).
  double condition = 0.0;
  bool defective = false;
};

/// Hessenberg reduction + Wilkinson-shifted QR on the complex Schur form.
/// Eigenvalues are always returned; `defective` is set when kappa(V) > max_condition.
GeneralEigen general_eigen(const ComplexMatrix& a, double max_condition = 1e8);
/// Throws Defective unless the eigenvector matrix is available and well conditioned.
GeneralEigen require_diagonalizable(const ComplexMatrix& a, double max_condition = 1e8);

/// sqrt(lambda_max(A^* A)).
double operator_norm(const ComplexMatrix& a);
/// max |lambda_i(A)|.
double spectral_radius(const ComplexMatrix& a);

/// true iff lambda_min(B - C) >= -tol. B, C hermitian of equal dim.
bool loewner_geq(const ComplexMatrix& b, const ComplexMatrix& c, double tol,
                 const Tolerances& tols = {});
/// lambda_min(B - C); the signed margin behind loewner_geq.
double loewner_margin(const ComplexMatrix& b, const ComplexMatrix& c, const Tolerances& tols = {});

/// LU with partial pivoting. Throws InvalidInput when singular.
ComplexMatrix inverse(const ComplexMatrix& a);

}  // namespace qnr
