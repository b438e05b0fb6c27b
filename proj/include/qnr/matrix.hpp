#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qnr {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

/// Dense n x n complex matrix stored row-major.
///
/// The square shape and dim >= 1 are enforced at construction. Finiteness of
/// entries is checked by the validating factories (from_rows, the JSON
/// reader); arithmetic on finite inputs is assumed to stay finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n);
  ComplexMatrix(std::size_t n, std::vector<cplx> row_major);

  /// Nested rows; throws InvalidInput unless square, non-empty and finite.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  static ComplexMatrix diagonal(std::initializer_list<cplx> d);
  static ComplexMatrix real_diagonal(std::span<const double> d);

  std::size_t dim() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const noexcept;
  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, cplx s);
Vector operator*(const ComplexMatrix& m, std::span<const cplx> x);

/// y = m * x into a caller-owned buffer (no allocation).
void multiply_into(const ComplexMatrix& m, std::span<const cplx> x, std::span<cplx> y) noexcept;
/// y = m^* x into a caller-owned buffer.
void adjoint_multiply_into(const ComplexMatrix& m, std::span<const cplx> x,
                           std::span<cplx> y) noexcept;

/// <x, y> = sum_i x_i conj(y_i); linear in the first argument.
cplx inner(std::span<const cplx> x, std::span<const cplx> y) noexcept;
double norm(std::span<const cplx> x) noexcept;
/// Scales x to unit norm; returns the original norm.
double normalize(std::span<cplx> x) noexcept;

/// Column j as a vector.
Vector column(const ComplexMatrix& m, std::size_t j);

/// Hermitian part (A + A^*)/2.
ComplexMatrix real_part(const ComplexMatrix& a);
/// Skew part (A - A^*)/(2i); hermitian.
ComplexMatrix imag_part(const ComplexMatrix& a);

/// ||A - A^*||_F <= tol * (1 + ||A||_F)
bool is_hermitian(const ComplexMatrix& a, double tol);

/// Block matrix (Z X; Y W) of dimension 2n.
ComplexMatrix assemble_blocks(const ComplexMatrix& z, const ComplexMatrix& x,
                              const ComplexMatrix& y, const ComplexMatrix& w);

}  // namespace qnr
