#pragma once
// Closed forms and brute-force references used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qnr/matrix.hpp"

namespace oracle {

using qnr::cplx;
using qnr::ComplexMatrix;

/// Eigenvalues of a 3x3 hermitian matrix from the trigonometric cubic solution, descending.
inline std::array<double, 3> hermitian3_eigenvalues(const ComplexMatrix& a) {
  const double a11 = a(0, 0).real(), a22 = a(1, 1).real(), a33 = a(2, 2).real();
  const double p1 = std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2));
  const double q = (a11 + a22 + a33) / 3.0;
  const double p2 = (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) + (a33 - q) * (a33 - q) + 2 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p == 0.0) return {q, q, q};
  ComplexMatrix b = a;
  for (int i = 0; i < 3; ++i) b(i, i) -= q;
  b *= 1.0 / p;
  // det of hermitian 3x3 (real)
  const cplx det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                   b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                   b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2 * p * std::cos(phi);
  const double e3 = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
  return {e1, 3 * q - e1 - e3, e3};
}

/// Roots of det(A - z) = 0 for 2x2 A.
inline std::array<cplx, 2> eigen2(const ComplexMatrix& a) {
  const cplx tr = a(0, 0) + a(1, 1), det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const cplx d = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + d) / 2.0, (tr - d) / 2.0};
}

/// Largest singular value of 2x2 A from the invariants of A^*A.
inline double norm2(const ComplexMatrix& a) {
  const double f2 = a.frobenius_norm() * a.frobenius_norm();
  const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
  return std::sqrt((f2 + std::sqrt(std::max(0.0, f2 * f2 - 4 * det * det))) / 2.0);
}

/// w(A) for 2x2 A: max modulus over the elliptical range with foci l1, l2 and
/// minor axis sqrt(tr(A^*A) - |l1|^2 - |l2|^2), sampled densely.
inline double numerical_radius2(const ComplexMatrix& a, int samples = 200000) {
  const auto l = eigen2(a);
  const double f2 = a.frobenius_norm() * a.frobenius_norm();
  const double minor = std::sqrt(std::max(0.0, f2 - std::norm(l[0]) - std::norm(l[1]))) / 2.0;
  const cplx c = (l[0] + l[1]) / 2.0;
  const double half_focal = std::abs(l[0] - l[1]) / 2.0;
  const double major = std::hypot(half_focal, minor);
  const cplx dir = half_focal > 0 ? (l[0] - l[1]) / (2.0 * half_focal) : cplx(1.0);
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = 2 * std::numbers::pi * k / samples;
    best = std::max(best, std::abs(c + dir * cplx(major * std::cos(t), minor * std::sin(t))));
  }
  return best;
}

/// Lower estimate of w_q for 2x2 A from a direct search over x = (cos t, e^{i phi} sin t)
/// and y = conj(q) x + sqrt(1-q^2) e^{i psi} x_perp.
inline double wq2_grid(const ComplexMatrix& a, double q, int steps = 90) {
  const double s = std::sqrt(std::max(0.0, 1 - q * q));
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = std::numbers::pi / 2 * i / steps;
    for (int j = 0; j < 2 * steps; ++j) {
      const double ph = std::numbers::pi * j / steps;
      const cplx x0 = std::cos(t), x1 = std::polar(std::sin(t), ph);
      const cplx p0 = -std::conj(x1), p1 = std::conj(x0);  // orthogonal to x
      const cplx ax0 = a(0, 0) * x0 + a(0, 1) * x1, ax1 = a(1, 0) * x0 + a(1, 1) * x1;
      for (int k = 0; k < 2 * steps; ++k) {
        const cplx e = std::polar(s, std::numbers::pi * k / steps);
        const cplx y0 = q * x0 + e * p0, y1 = q * x1 + e * p1;
        best = std::max(best, std::abs(ax0 * std::conj(y0) + ax1 * std::conj(y1)));
      }
    }
  }
  return best;
}

inline ComplexMatrix random_matrix(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> nd;
  ComplexMatrix m(n);
  for (auto& v : m.data()) v = cplx(scale * nd(g), scale * nd(g));
  return m;
}

inline double diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).frobenius_norm(); }

}  // namespace oracle
