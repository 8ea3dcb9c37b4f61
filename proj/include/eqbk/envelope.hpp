#pragma once

#include <functional>
#include <vector>

#include "eqbk/grid.hpp"

namespace eqbk {

/// Admissible slope range [lo, hi] for the equilibrium envelope.  lo > 0
/// encodes vanishing at zeta = 0, hi < degree_m vanishing at infinity.
struct SlopeWindow {
  double lo;
  double hi;

  void validate() const {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi))
      throw InvalidWindowError("SlopeWindow: need finite lo < hi");
  }
};

/// Result of the slope-constrained convex envelope computation.
///
/// u_e is the largest convex minorant of the obstacle whose slopes stay in
/// the window; contact marks the set D = {u_e = u}; dual samples the
/// Legendre transform of the obstacle on a slope grid over the window; slope
/// holds forward differences of u_e.
struct EnvelopeResult {
  GridFn u_e;
  Mask contact;
  GridFn dual;
  GridFn slope;
  SlopeWindow window;
};

/// Discrete Legendre transform f*(s) = max_i (s v_i - f(v_i)) at every node
/// of slope_grid, exact for the sampled data (linear-time merge over sorted
/// slopes).
GridFn legendre_transform(const GridFn& f, const VGrid& slope_grid);

/// Slope-constrained convex envelope via the double discrete Legendre
/// transform with the dual domain clipped to the window.  Exact for the grid
/// data; contact detected with relative tolerance 1e-9 * (1 + |u|).
EnvelopeResult constrained_envelope(const GridFn& u, SlopeWindow window);

/// Independent route to the same object: brute-force slope tangency scans
/// plus a monotone-chain hull between the tangency points, with exact
/// tangent rays outside.  Used to cross-check constrained_envelope.
GridFn envelope_oracle(const GridFn& u, SlopeWindow window);

/// Mask of nodes where u - u_e <= tol.
Mask contact_set(const GridFn& u, const GridFn& u_e, double tol);

/// Equilibrium measure on the v-line: interior second-difference density of
/// u_e plus the end-slope defects carried as point masses at the grid ends
/// (tail + pole mass of the compactified line).  Total mass is hi - lo.
struct EquilibriumMeasure {
  GridFn density;
  double atom_left;
  double atom_right;

  double total_mass() const {
    double s = 0;
    for (int i = 1; i + 1 < density.size(); ++i) s += density.values[i];
    return s * density.grid.step() + atom_left + atom_right;
  }
};

EquilibriumMeasure equilibrium_measure(const EnvelopeResult& res);

/// One regularity probe row: largest second difference quotient of u_e and
/// the discrete slope jump across the free boundary, on one grid.
struct C11Row {
  int n_points;
  double h;
  double max_d2;
  double slope_jump;
};

/// Re-solves the envelope on each grid and reports the C^{1,1} diagnostics.
std::vector<C11Row> c11_probe(const std::function<double(double)>& obstacle,
                              SlopeWindow window, const std::vector<VGrid>& grids);

}  // namespace eqbk
