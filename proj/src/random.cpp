#include "qnr/random.hpp"

#include <cmath>

namespace qnr {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Vector gaussian_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (auto& e : v) {
    const double re = nd(rng);
    const double im = nd(rng);
    e = {re, im};
  }
  return v;
}

ComplexMatrix gaussian_matrix(Rng& rng, std::size_t n) {
  return ComplexMatrix(n, gaussian_vector(rng, n * n));
}

Vector random_unit_vector(Rng& rng, std::size_t n) {
  Vector v;
  do {
    v = gaussian_vector(rng, n);
  } while (normalize(v) == 0.0);
  return v;
}

Vector random_orthogonal_unit(Rng& rng, std::span<const cplx> x) {
  Vector z;
  for (;;) {
    z = gaussian_vector(rng, x.size());
    const cplx c = inner(z, x);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= c * x[i];
    if (normalize(z) > 1e-8) return z;
  }
}

ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  // Modified Gram-Schmidt on a Gaussian matrix (columns).
  ComplexMatrix g = gaussian_matrix(rng, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += std::conj(g(i, j)) * g(i, k);
      for (std::size_t i = 0; i < n; ++i) g(i, k) -= c * g(i, j);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(g(i, k));
    s = std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) g(i, k) /= s;
  }
  return g;
}

}  // namespace qnr
