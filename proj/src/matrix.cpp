#include "qnr/matrix.hpp"

#include <cmath>

#include "qnr/errors.hpp"
#include "qnr/tolerances.hpp"

namespace qnr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::Defective: return "Defective";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SpectrumNotSectorial: return "SpectrumNotSectorial";
    case ErrorKind::NegativeSpectrum: return "NegativeSpectrum";
    case ErrorKind::NotAccretive: return "NotAccretive";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::EstimatorNotConverged: return "EstimatorNotConverged";
    case ErrorKind::UnknownBound: return "UnknownBound";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  for (double v : {eig_tol, psd_tol, cmp_tol, opt_tol}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, "tolerances must be strictly positive");
    }
  }
}

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<cplx> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw Error(ErrorKind::InvalidInput, "row-major data does not form an n x n grid");
  }
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorKind::InvalidInput, "matrix must have dim >= 1");
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(ErrorKind::InvalidInput, "matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  if (!m.all_finite()) throw Error(ErrorKind::InvalidInput, "matrix entries must be finite");
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  std::vector<std::vector<cplx>> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<cplx> d) {
  return diagonal(std::span<const cplx>(d.begin(), d.size()));
}

ComplexMatrix ComplexMatrix::real_diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMatrix::all_finite() const noexcept {
  for (const auto& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

namespace {
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix dimensions differ");
}
}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) noexcept {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }
ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs);
  const std::size_t n = lhs.dim();
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += a * rhs(k, j);
    }
  }
  return r;
}

void multiply_into(const ComplexMatrix& m, std::span<const cplx> x, std::span<cplx> y) noexcept {
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
}

void adjoint_multiply_into(const ComplexMatrix& m, std::span<const cplx> x,
                           std::span<cplx> y) noexcept {
  const std::size_t n = m.dim();
  for (std::size_t j = 0; j < n; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i];
    for (std::size_t j = 0; j < n; ++j) y[j] += std::conj(m(i, j)) * xi;
  }
}

Vector operator*(const ComplexMatrix& m, std::span<const cplx> x) {
  if (x.size() != m.dim()) throw Error(ErrorKind::DimensionMismatch, "vector length != dim");
  Vector y(m.dim());
  multiply_into(m, x, y);
  return y;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) noexcept {
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm(std::span<const cplx> x) noexcept {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

double normalize(std::span<cplx> x) noexcept {
  const double nrm = norm(x);
  if (nrm > 0.0) {
    for (auto& v : x) v /= nrm;
  }
  return nrm;
}

Vector column(const ComplexMatrix& m, std::size_t j) {
  Vector c(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) c[i] = m(i, j);
  return c;
}

ComplexMatrix real_part(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

ComplexMatrix imag_part(const ComplexMatrix& a) {
  // (A - A^*)/(2i) = -i/2 (A - A^*)
  const std::size_t n = a.dim();
  const cplx f(0.0, -0.5);
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = a(i, i).imag();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = f * (a(i, j) - std::conj(a(j, i)));
      r(i, j) = v;
      r(j, i) = std::conj(v);
    }
  }
  return r;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) {
      const double d = std::norm(a(i, j) - std::conj(a(j, i)));
      s += (i == j) ? d : 2.0 * d;
    }
  return std::sqrt(s) <= tol * (1.0 + a.frobenius_norm());
}

ComplexMatrix assemble_blocks(const ComplexMatrix& z, const ComplexMatrix& x,
                              const ComplexMatrix& y, const ComplexMatrix& w) {
  const std::size_t n = x.dim();
  if (z.dim() != n || y.dim() != n || w.dim() != n) {
    throw Error(ErrorKind::DimensionMismatch, "blocks must share one dimension");
  }
  ComplexMatrix t(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t(i, j) = z(i, j);
      t(i, j + n) = x(i, j);
      t(i + n, j) = y(i, j);
      t(i + n, j + n) = w(i, j);
    }
  }
  return t;
}

}  // namespace qnr
