#include "qnr/nrange.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qnr/errors.hpp"
#include "qnr/spectral.hpp"

namespace qnr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kThetaTol = 1e-10;

struct Cartesian {
  ComplexMatrix re, im;
  explicit Cartesian(const ComplexMatrix& a) : re(real_part(a)), im(imag_part(a)) {}

  ComplexMatrix rotated(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    ComplexMatrix m(re.dim());
    auto md = m.data();
    auto rd = re.data();
    auto id = im.data();
    for (std::size_t k = 0; k < md.size(); ++k) md[k] = c * rd[k] - s * id[k];
    return m;
  }

  double support(double theta) const {
    return hermitian_eigenvalues(rotated(theta)).front();
  }
};

void require_grid(int grid) {
  if (grid < 64) throw Error(ErrorKind::InvalidInput, "theta grid must have at least 64 points");
}

}  // namespace

double support_value(const ComplexMatrix& a, double theta, const Tolerances& tol) {
  const double c = std::cos(theta), s = std::sin(theta);
  ComplexMatrix m = real_part(a) * cplx(c) - imag_part(a) * cplx(s);
  return hermitian_eigenvalues(m, tol).front();
}

NumericalRadius numerical_radius_witness(const ComplexMatrix& a, int grid) {
  require_grid(grid);
  const Cartesian parts(a);
  const double h = kTwoPi / grid;

  std::size_t best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const double v = parts.support(h * k);
    if (v > best) {
      best = v;
      best_k = static_cast<std::size_t>(k);
    }
  }

  // Golden-section on [theta_k - h, theta_k + h].
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = h * static_cast<double>(best_k) - h, hi = h * static_cast<double>(best_k) + h;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = parts.support(x1), f2 = parts.support(x2);
  while (hi - lo > kThetaTol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = parts.support(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = parts.support(x2);
    }
  }
  double theta = h * static_cast<double>(best_k);
  const double mid = 0.5 * (lo + hi);
  const double fm = parts.support(mid);
  if (fm > best) {
    best = fm;
    theta = mid;
  }
  theta = std::fmod(theta + kTwoPi, kTwoPi);

  auto spec = hermitian_eigen(parts.rotated(theta));
  NumericalRadius out;
  out.theta = theta;
  out.witness = column(spec.eigenvectors, 0);
  const cplx rq = inner(a * std::span<const cplx>(out.witness), out.witness);
  out.value = std::max(best, std::abs(rq));
  return out;
}

double numerical_radius(const ComplexMatrix& a, int grid) {
  return numerical_radius_witness(a, grid).value;
}

SectorCertificate sector_angle(const ComplexMatrix& a, const Tolerances& tol) {
  const ComplexMatrix re = real_part(a);
  const ComplexMatrix im = imag_part(a);
  const auto rs = hermitian_eigen(re, tol);
  if (!(rs.smallest() > tol.psd_tol)) {
    throw Error(ErrorKind::NotAccretive, "lambda_min(R(A)) = " + std::to_string(rs.smallest()) +
                                             " is not above psd_tol");
  }
  const std::size_t n = a.dim();
  ComplexMatrix rinv_half(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        s += rs.eigenvectors(i, k) * (1.0 / std::sqrt(rs.eigenvalues[k])) *
             std::conj(rs.eigenvectors(j, k));
      }
      rinv_half(i, j) = s;
    }
  }
  const ComplexMatrix m = real_part(rinv_half * im * rinv_half);
  const auto ms = hermitian_eigen(m, tol);
  const bool top = std::abs(ms.largest()) >= std::abs(ms.smallest());
  const double t = top ? std::abs(ms.largest()) : std::abs(ms.smallest());

  SectorCertificate cert;
  cert.alpha = std::atan(t);
  Vector v = column(ms.eigenvectors, top ? 0 : n - 1);
  cert.witness_x = rinv_half * std::span<const cplx>(v);
  normalize(cert.witness_x);
  const cplx rq = inner(re * std::span<const cplx>(cert.witness_x), cert.witness_x);
  cert.positive_real_part = rq.real() > 0.0;
  return cert;
}

bool verify_sector_certificate(const ComplexMatrix& a, const SectorCertificate& cert, double eps,
                               const Tolerances& tol) {
  const ComplexMatrix re = real_part(a), im = imag_part(a);
  const double ta = std::tan(std::min(cert.alpha + eps, std::numbers::pi / 2 - 1e-12));
  const ComplexMatrix base = re * cplx(ta);
  if (hermitian_eigenvalues(base - im, tol).back() < -tol.psd_tol) return false;
  if (hermitian_eigenvalues(base + im, tol).back() < -tol.psd_tol) return false;
  const cplx rq = inner(re * std::span<const cplx>(cert.witness_x), cert.witness_x);
  return rq.real() > 0.0;
}

bool is_sectorial(const ComplexMatrix& a, double alpha, const Tolerances& tol) {
  try {
    return sector_angle(a, tol).alpha <= alpha + 1e-9;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotAccretive) return false;
    throw;
  }
}

bool is_accretive(const ComplexMatrix& a, const Tolerances& tol) {
  return hermitian_eigenvalues(real_part(a), tol).back() > tol.psd_tol;
}

bool is_accretive_dissipative(const ComplexMatrix& a, const Tolerances& tol) {
  return is_accretive(a, tol) && hermitian_eigenvalues(imag_part(a), tol).back() > tol.psd_tol;
}

bool is_normaloid(const ComplexMatrix& a, const Tolerances& tol) {
  const double nrm = operator_norm(a);
  return std::abs(numerical_radius(a) - nrm) <= tol.cmp_tol * (1.0 + nrm);
}

RangeBoundary range_boundary(const ComplexMatrix& a, int grid) {
  require_grid(grid);
  const Cartesian parts(a);
  RangeBoundary rb;
  rb.thetas.reserve(grid);
  rb.support_values.reserve(grid);
  rb.boundary_points.reserve(grid);
  for (int k = 0; k < grid; ++k) {
    const double theta = kTwoPi * k / grid;
    auto spec = hermitian_eigen(parts.rotated(theta));
    const Vector x = column(spec.eigenvectors, 0);
    rb.thetas.push_back(theta);
    rb.support_values.push_back(spec.largest());
    rb.boundary_points.push_back(inner(a * std::span<const cplx>(x), x));
  }
  return rb;
}

}  // namespace qnr
