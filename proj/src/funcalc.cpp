#include "qnr/funcalc.hpp"

#include <cmath>

#include "qnr/errors.hpp"
#include "qnr/spectral.hpp"

namespace qnr {

double SpectralFunction::operator()(double t) const noexcept {
  switch (kind) {
    case Kind::Power: return gamma == 0.0 ? 1.0 : std::pow(t, gamma);
    case Kind::Ratio: return t / (1.0 + t);
    case Kind::Shift: return 1.0 + t;
    case Kind::Square: return t * t;
  }
  return 0.0;
}

namespace {

ComplexMatrix recombine(const ComplexMatrix& u, const std::vector<double>& d) {
  const std::size_t n = u.dim();
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * d[k] * std::conj(u(j, k));
      r(i, j) = s;
      r(j, i) = std::conj(s);
    }
    r(i, i) = r(i, i).real();
  }
  return r;
}

}  // namespace

ComplexMatrix principal_power(const ComplexMatrix& a, double t, const Tolerances& tol,
                              double max_condition) {
  if (!(t >= -1.0 && t <= 1.0)) throw Error(ErrorKind::InvalidInput, "power must lie in [-1, 1]");
  const std::size_t n = a.dim();

  if (is_hermitian(a, tol.eig_tol)) {
    auto spec = hermitian_eigen(a, tol);
    if (!(spec.smallest() > 0.0)) {
      throw Error(ErrorKind::SpectrumNotSectorial, "hermitian input has a non-positive eigenvalue");
    }
    if (t == 1.0) return a;
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = std::pow(spec.eigenvalues[k], t);
    return recombine(spec.eigenvectors, d);
  }

  GeneralEigen ge = general_eigen(a, max_condition);
  for (const auto& l : ge.eigenvalues) {
    if (!(l.real() > 0.0)) {
      throw Error(ErrorKind::SpectrumNotSectorial, "eigenvalue outside the open right half-plane");
    }
  }
  if (ge.defective || !ge.eigenvectors) {
    throw Error(ErrorKind::Defective, "eigenvector basis condition number " +
                                          std::to_string(ge.condition) + " is too large");
  }
  if (t == 1.0) return a;

  const ComplexMatrix& v = *ge.eigenvectors;
  ComplexMatrix vd = v;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx p = std::exp(t * std::log(ge.eigenvalues[k]));
    for (std::size_t i = 0; i < n; ++i) vd(i, k) *= p;
  }
  return vd * inverse(v);
}

ComplexMatrix matrix_abs(const ComplexMatrix& x, const Tolerances& tol) {
  auto spec = hermitian_eigen(real_part(x.adjoint() * x), tol);
  std::vector<double> d(x.dim());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::sqrt(std::max(0.0, spec.eigenvalues[k]));
  return recombine(spec.eigenvectors, d);
}

ComplexMatrix apply_spectral_function(const ComplexMatrix& h, SpectralFunction f,
                                      const Tolerances& tol) {
  auto spec = hermitian_eigen(h, tol);
  std::vector<double> d(h.dim());
  for (std::size_t k = 0; k < d.size(); ++k) {
    double l = spec.eigenvalues[k];
    if (f.needs_nonnegative()) {
      if (l < -tol.psd_tol) {
        throw Error(ErrorKind::NegativeSpectrum, "eigenvalue " + std::to_string(l) +
                                                     " lies outside the function domain");
      }
      if (l < 0.0) l = 0.0;
      if (f.kind == SpectralFunction::Kind::Power && f.gamma < 0.0 && !(l > 0.0)) {
        throw Error(ErrorKind::NegativeSpectrum, "negative power of a singular matrix");
      }
    }
    d[k] = f(l);
  }
  return recombine(spec.eigenvectors, d);
}

}  // namespace qnr
