#pragma once

#include "qnr/matrix.hpp"
#include "qnr/tolerances.hpp"

namespace qnr {

/// Scalar functions that may be lifted to hermitian matrices.
struct SpectralFunction {
  enum class Kind { Power, Ratio, Shift, Square };
  Kind kind = Kind::Power;
  double gamma = 1.0;  // exponent for Kind::Power

  static SpectralFunction power(double g) { return {Kind::Power, g}; }
  /// t / (1 + t)
  static SpectralFunction ratio() { return {Kind::Ratio, 0.0}; }
  /// 1 + t
  static SpectralFunction shift() { return {Kind::Shift, 0.0}; }
  static SpectralFunction square() { return {Kind::Square, 0.0}; }

  bool needs_nonnegative() const noexcept { return kind == Kind::Power || kind == Kind::Ratio; }
  double operator()(double t) const noexcept;
};

/// Principal power A^t for t in [-1, 1], through an eigendecomposition.
///
/// Hermitian inputs go through the Jacobi solver; everything else through the
/// general solver and A^t = V diag(lambda^t) V^{-1}.
/// Throws SpectrumNotSectorial if some eigenvalue has Re <= 0, Defective if the
/// eigenvector basis has condition number above max_condition.
ComplexMatrix principal_power(const ComplexMatrix& a, double t, const Tolerances& tol = {},
                              double max_condition = 1e8);

/// |X| = (X^* X)^{1/2}.
ComplexMatrix matrix_abs(const ComplexMatrix& x, const Tolerances& tol = {});

/// f(H) for hermitian H. Eigenvalues in [-psd_tol, 0) are treated as 0 when f
/// needs a nonnegative argument; anything below that raises NegativeSpectrum.
/// Negative exponents additionally require a strictly positive spectrum.
ComplexMatrix apply_spectral_function(const ComplexMatrix& h, SpectralFunction f,
                                      const Tolerances& tol = {});

}  // namespace qnr
