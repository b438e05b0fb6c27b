#pragma once

#include <cstdint>
#include <random>

#include "qnr/matrix.hpp"

namespace qnr {

using Rng = std::mt19937_64;

/// Independent deterministic stream for (seed, stream index).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Entries with independent standard normal real and imaginary parts.
Vector gaussian_vector(Rng& rng, std::size_t n);
ComplexMatrix gaussian_matrix(Rng& rng, std::size_t n);
/// Uniform on the complex unit sphere.
Vector random_unit_vector(Rng& rng, std::size_t n);
/// Unit vector orthogonal to the unit vector x (requires dim >= 2).
Vector random_orthogonal_unit(Rng& rng, std::span<const cplx> x);
/// Haar-distributed unitary.
ComplexMatrix random_unitary(Rng& rng, std::size_t n);

}  // namespace qnr
