#include "qnr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qnr/errors.hpp"

namespace qnr {

namespace {

constexpr double kJacobiThreshold = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kDeflation = 1e-13;

double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi on an exactly hermitian matrix. Diagonal of `a` holds the
// (unsorted) eigenvalues on return; `v` accumulates the rotations if non-null.
void jacobi_in_place(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.dim();
  const double scale = a.frobenius_norm();
  if (scale == 0.0 || n == 1) return;
  const double stop = kJacobiThreshold * scale;

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_mass(a) <= stop) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= std::numeric_limits<double>::min()) continue;

        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx ph = std::conj(apq / mag);  // e^{-i phi}

        // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
        const cplx gpp = c, gpq = s, gqp = -s * ph, gqq = c * ph;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = (*v)(k, p), vkq = (*v)(k, q);
            (*v)(k, p) = vkp * gpp + vkq * gqp;
            (*v)(k, q) = vkp * gpq + vkq * gqq;
          }
        }
      }
    }
  }
  if (off_diagonal_mass(a) > stop) {
    throw Error(ErrorKind::NoConvergence, "Jacobi sweeps exhausted");
  }
}

ComplexMatrix checked_hermitian_copy(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
  if (!is_hermitian(a, tol.eig_tol)) {
    throw Error(ErrorKind::NotHermitian, "matrix is not hermitian within eig_tol");
  }
  return real_part(a);
}

std::vector<std::size_t> descending_order(const ComplexMatrix& d) {
  std::vector<std::size_t> idx(d.dim());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return d(i, i).real() > d(j, j).real();
  });
  return idx;
}

}  // namespace

HermitianSpectrum hermitian_eigen(const ComplexMatrix& a, const Tolerances& tol) {
  ComplexMatrix work = checked_hermitian_copy(a, tol);
  ComplexMatrix v = ComplexMatrix::identity(a.dim());
  jacobi_in_place(work, &v);

  const auto order = descending_order(work);
  HermitianSpectrum out;
  out.eigenvalues.reserve(a.dim());
  out.eigenvectors = ComplexMatrix(a.dim());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.eigenvalues.push_back(work(order[k], order[k]).real());
    for (std::size_t i = 0; i < a.dim(); ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, const Tolerances& tol) {
  ComplexMatrix work = checked_hermitian_copy(a, tol);
  jacobi_in_place(work, nullptr);
  std::vector<double> ev(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) ev[i] = work(i, i).real();
  std::stable_sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

std::pair<double, Vector> hermitian_top_eigenpair(const ComplexMatrix& a, const Tolerances& tol) {
  auto spec = hermitian_eigen(a, tol);
  return {spec.eigenvalues.front(), column(spec.eigenvectors, 0)};
}

// --- general eigenproblem ---------------------------------------------------

namespace {

void hessenberg_reduce(ComplexMatrix& h, ComplexMatrix& z) {
  const std::size_t n = h.dim();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    Vector v(m);
    double xnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = h(k + 1 + i, k);
      xnorm += std::norm(v[i]);
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = v[0];
    const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0);
    v[0] += phase * xnorm;  // v = x + e^{i arg x0} ||x|| e1
    if (normalize(v) == 0.0) continue;

    // H <- P H P with P = I - 2 v v^*, acting on indices k+1..n-1.
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
      s *= 2.0;
      for (std::size_t i = 0; i < m; ++i) h(k + 1 + i, j) -= v[i] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += h(i, k + 1 + j) * v[j];
      s *= 2.0;
      for (std::size_t j = 0; j < m; ++j) h(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += z(i, k + 1 + j) * v[j];
      s *= 2.0;
      for (std::size_t j = 0; j < m; ++j) z(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Givens {
  cplx c, s;
};

// Reduces upper Hessenberg h to upper triangular (complex Schur form),
// accumulating the unitary similarity into z.
void schur_qr(ComplexMatrix& h, ComplexMatrix& z) {
  const std::size_t n = h.dim();
  if (n == 1) return;
  const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
  const std::size_t max_iter = 100 * n;
  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::size_t hi = n - 1;
  std::vector<Givens> rot(n);

  while (hi > 0) {
    std::size_t lo = hi;
    while (lo > 0) {
      double scale = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (scale == 0.0) scale = hnorm;
      if (std::abs(h(lo, lo - 1)) <= kDeflation * scale) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++total > max_iter) throw Error(ErrorKind::NoConvergence, "shifted QR did not converge");
    ++since_deflation;

    const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
    cplx mu;
    if (since_deflation % 11 == 10) {
      mu = d + 0.75 * std::abs(c);  // exceptional shift
    } else {
      const cplx half = 0.5 * (a - d);
      const cplx disc = std::sqrt(half * half + b * c);
      const cplx m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
      mu = (std::abs(m1 - d) < std::abs(m2 - d)) ? m1 : m2;
    }

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    for (std::size_t k = lo; k < hi; ++k) {
      const cplx x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      Givens g{1.0, 0.0};
      if (r > 0.0) g = {x / r, y / r};
      rot[k] = g;
      for (std::size_t j = k; j < n; ++j) {
        const cplx u = h(k, j), w = h(k + 1, j);
        h(k, j) = std::conj(g.c) * u + std::conj(g.s) * w;
        h(k + 1, j) = -g.s * u + g.c * w;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = rot[k];
      const std::size_t row_end = std::min(k + 2, hi);
      for (std::size_t i = 0; i <= row_end; ++i) {
        const cplx u = h(i, k), w = h(i, k + 1);
        h(i, k) = u * g.c + w * g.s;
        h(i, k + 1) = -u * std::conj(g.s) + w * std::conj(g.c);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const cplx u = z(i, k), w = z(i, k + 1);
        z(i, k) = u * g.c + w * g.s;
        z(i, k + 1) = -u * std::conj(g.s) + w * std::conj(g.c);
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
}

}  // namespace

GeneralEigen general_eigen(const ComplexMatrix& a, double max_condition) {
  if (a.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
  const std::size_t n = a.dim();
  ComplexMatrix t = a;
  ComplexMatrix z = ComplexMatrix::identity(n);
  hessenberg_reduce(t, z);
  schur_qr(t, z);

  GeneralEigen out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = t(i, i);

  // Eigenvectors of the triangular factor by back substitution, with the
  // usual perturbation of vanishing denominators.
  const double small = std::max(1e-15 * t.frobenius_norm(), std::numeric_limits<double>::min());
  ComplexMatrix y(n);
  for (std::size_t k = 0; k < n; ++k) {
    y(k, k) = 1.0;
    for (std::size_t ii = k; ii-- > 0;) {
      cplx s = 0.0;
      for (std::size_t j = ii + 1; j <= k; ++j) s += t(ii, j) * y(j, k);
      cplx denom = t(ii, ii) - t(k, k);
      if (std::abs(denom) < small) denom = small;
      y(ii, k) = -s / denom;
    }
  }
  ComplexMatrix v = z * y;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(v(i, k));
    s = std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) v(i, k) /= s;
  }

  try {
    const ComplexMatrix vinv = inverse(v);
    out.condition = operator_norm(v) * operator_norm(vinv);
    if (!std::isfinite(out.condition)) out.condition = std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    out.condition = std::numeric_limits<double>::infinity();
  }
  out.defective = !(out.condition <= max_condition);
  if (std::isfinite(out.condition)) out.eigenvectors = std::move(v);
  return out;
}

GeneralEigen require_diagonalizable(const ComplexMatrix& a, double max_condition) {
  GeneralEigen ge = general_eigen(a, max_condition);
  if (ge.defective || !ge.eigenvectors) {
    throw Error(ErrorKind::Defective, "eigenvector matrix condition number " +
                                          std::to_string(ge.condition) + " exceeds limit");
  }
  return ge;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.dim() == 1) return std::abs(a(0, 0));
  const ComplexMatrix g = a.adjoint() * a;
  ComplexMatrix work = real_part(g);
  jacobi_in_place(work, nullptr);
  double lmax = 0.0;
  for (std::size_t i = 0; i < work.dim(); ++i) lmax = std::max(lmax, work(i, i).real());
  return std::sqrt(lmax);
}

double spectral_radius(const ComplexMatrix& a) {
  const auto ge = general_eigen(a);
  double r = 0.0;
  for (const auto& l : ge.eigenvalues) r = std::max(r, std::abs(l));
  return r;
}

double loewner_margin(const ComplexMatrix& b, const ComplexMatrix& c, const Tolerances& tols) {
  if (b.dim() != c.dim()) throw Error(ErrorKind::DimensionMismatch, "Loewner operands differ");
  if (!is_hermitian(b, tols.eig_tol) || !is_hermitian(c, tols.eig_tol)) {
    throw Error(ErrorKind::NotHermitian, "Loewner operands must be hermitian");
  }
  return hermitian_eigenvalues(b - c, tols).back();
}

bool loewner_geq(const ComplexMatrix& b, const ComplexMatrix& c, double tol,
                 const Tolerances& tols) {
  return loewner_margin(b, c, tols) >= -tol;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix lu = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double scale = a.max_abs();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (!(std::abs(lu(piv, k)) > 1e-14 * scale)) {
      throw Error(ErrorKind::InvalidInput, "matrix is numerically singular");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu(k, j), lu(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const cplx d = lu(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const cplx f = lu(i, k) / d;
      if (f == cplx(0.0)) continue;
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < n; ++j) inv(i, j) -= f * inv(k, j);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx d = lu(k, k);
    for (std::size_t j = 0; j < n; ++j) inv(k, j) /= d;
  }
  return inv;
}

}  // namespace qnr
