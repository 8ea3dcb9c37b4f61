#pragma once

#include <functional>

#include "eqbk/bergman.hpp"

namespace eqbk {

/// 2D polar quadrature: a v-grid (odd point count for Simpson) times
/// n_theta equispaced angles.
struct PolarQuadrature {
  VGrid vgrid;
  int n_theta;
};

struct GramResult {
  KernelEval eval;
  double condition_estimate;  // lambda_max/lambda_min of the raw Gram matrix
};

/// Independent Bergman route that never assumes radial symmetry: assembles
/// the full monomial Gram matrix under 2D quadrature, factorizes it
/// (Cholesky on the diagonally rescaled Hermitian form), and evaluates B_k
/// from the inverse quadratic form along theta = 0.
///
/// Limited to k <= 40: monomial Gram matrices are exponentially
/// ill-conditioned, and this path exists to cross-validate the radial one at
/// small k.  Throws ConditioningError (with the condition estimate) when the
/// matrix is numerically singular or the estimate exceeds 1e14.
GramResult gram_bergman(const std::function<double(double, double)>& phi,
                        int degree_m, int k, int j_lo, int j_hi,
                        const PolarQuadrature& quad, const VGrid& eval_grid);

/// Convenience adapter for radial weights (still goes through the full 2D
/// pipeline above).
GramResult gram_bergman_radial(const Weight& w, int k, int j_lo, int j_hi,
                               const VGrid& eval_grid);

}  // namespace eqbk
