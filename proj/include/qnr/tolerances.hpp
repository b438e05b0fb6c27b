#pragma once

namespace qnr {

struct Tolerances {
  double eig_tol = 1e-12;  // hermiticity test for eigensolver input
  double psd_tol = 1e-9;   // positive (semi)definiteness and Loewner comparisons
  double cmp_tol = 1e-7;   // relative comparison of computed reals
  double opt_tol = 1e-9;   // optimizer stability / convergence

  /// Throws InvalidInput unless every field is strictly positive and finite.
  void validate() const;
};

}  // namespace qnr
