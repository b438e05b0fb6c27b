#pragma once

#include <vector>

#include "qnr/bounds.hpp"
#include "qnr/matrix.hpp"
#include "qnr/report.hpp"
#include "qnr/spectral.hpp"

namespace qnr {

struct Block2x2 {
  ComplexMatrix z, x, y, w;
  ComplexMatrix assembled;  // (Z X; Y W)
};

Block2x2 make_block(const ComplexMatrix& z, const ComplexMatrix& x, const ComplexMatrix& y,
                    const ComplexMatrix& w);
/// (0 X; Y 0)
Block2x2 make_offdiag(const ComplexMatrix& x, const ComplexMatrix& y);
/// (X Y; Y X)
Block2x2 make_symmetric_pair(const ComplexMatrix& x, const ComplexMatrix& y);

/// w_q((0 A; A 0)) for hermitian A from the extremes of the block spectrum {+-lambda_i}.
double offdiag_hermitian_closed_form(const HermitianSpectrum& spectrum, cplx q);
double offdiag_hermitian_closed_form(const std::vector<double>& eigenvalues, cplx q);

/// Rank-one u v^* with <u, v> = 0 built from the first two columns of x
/// (so its square vanishes). Returns x itself when x^2 = 0 already.
ComplexMatrix square_zero_from(const ComplexMatrix& x, const Tolerances& tol = {});

/// K1 (rotation of the lower block) and K2 (swap of the blocks) equalities.
std::vector<BoundCheckReport> check_invariances(const ComplexMatrix& x, const ComplexMatrix& y,
                                                cplx q, const std::vector<double>& thetas,
                                                Evaluator& ev);

/// K1..K14 with X = in.a and Y = in.b.
std::vector<BoundCheckReport> check_block_bound(const std::string& id, const BoundInputs& in,
                                                Evaluator& ev);

}  // namespace qnr
