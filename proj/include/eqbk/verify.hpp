#pragma once

#include <map>
#include <vector>

#include "eqbk/bergman.hpp"
#include "eqbk/envelope.hpp"
#include "eqbk/report.hpp"
#include "eqbk/weight.hpp"

namespace eqbk {

/// Default display grid: the base potential is within 7e-6 of its asymptotes
/// at |v| = 12 and every preset feature lives inside [-4, 4].
inline VGrid default_grid() { return VGrid(-12.0, 12.0, 4096); }

/// Wide grid for monomial-norm quadrature: the extreme-index integrands
/// decay only like e^{-|v|}, so pushing the truncation 92 below the peak
/// needs |v| ~ 100.
inline VGrid default_norm_grid() { return VGrid(-120.0, 120.0, 4097); }

/// Wide odd grid for the dimension identity (reference tails ~ e^{-60}).
inline VGrid wide_eval_grid() { return VGrid(-60.0, 60.0, 32769); }

/// Default k sweep: log-spaced doubling exposes rates with six points.
inline std::vector<int> default_ks() { return {25, 50, 100, 200, 400, 800}; }

/// Shared state for one (weight, window) verification run: obstacle,
/// envelope, reference and curvature samples, and a per-k cache of norms and
/// kernel evaluations.  All computations are pure; the cache only memoizes.
struct VerifyContext {
  Weight weight;
  SlopeWindow window;
  VGrid grid;
  VGrid norm_grid;

  GridFn u;                  // obstacle on grid
  std::vector<double> ref;   // g'' on grid
  std::vector<double> curv;  // u'' on grid
  EnvelopeResult env;

  static VerifyContext make(Weight w, SlopeWindow window, VGrid grid = default_grid(),
                            VGrid norm_grid = default_norm_grid());

  /// Monomial index window for tensor power k (slope window scaled by k).
  SectionSpace space(int k) const;

  const LogNorms& norms_for(int k);
  const KernelEval& eval_for(int k);

  /// Obstacle-envelope gap u - u_e at an arbitrary point (linear interp).
  double gap(double v) const;

 private:
  VerifyContext(Weight w, SlopeWindow win, VGrid g, VGrid ng, GridFn u_,
                EnvelopeResult env_);
  std::map<int, LogNorms> norms_;
  std::map<int, KernelEval> evals_;
};

/// L^1 convergence of k^{-1} B_k dref toward the equilibrium measure
/// restricted to D and the curvature-positive set.
ConvergenceReport l1_report(VerifyContext& ctx, const std::vector<int>& ks);

/// Uniform convergence of the Bergman metric to u_e at rate ln k / k.
ConvergenceReport uniform_report(VerifyContext& ctx, const std::vector<int>& ks);

/// Exponential decay of k^{-1} B_k off the contact set: checks the exponent
/// u - u_e at the probe points.  Probes must have gap >= 0.05.
ConvergenceReport decay_report(VerifyContext& ctx, const std::vector<double>& probes,
                               const std::vector<int>& ks);

/// Local Morse bound: C_k = max over {u'' > eps} of k^{-1} B_k g'' / u''
/// decreasing toward one.
ConvergenceReport morse_report(VerifyContext& ctx, const std::vector<int>& ks,
                               double eps = 0.01);

/// Off-diagonal concentration: the smeared kernel pairing S_k against the
/// diagonal target for test functions f, g on the display grid.
ConvergenceReport offdiag_report(VerifyContext& ctx, int k, const GridFn& f,
                                 const GridFn& g);

/// Leading-order diagonal expansion at an interior curvature-positive probe:
/// B_k g''/k - u'' and its k-scaled residual.
ConvergenceReport expansion_probe(VerifyContext& ctx, double v_star,
                                  const std::vector<int>& ks);

/// Nodewise match of the envelope Monge-Ampere density with the indicator
/// form of the equilibrium measure, away from free boundaries.
ConvergenceReport eqmeasure_report(VerifyContext& ctx);

enum class DivisorExample { BallAtOrigin, ComplementOfBall };

/// The two built-in divisor presets on the degree-2 base weight: contact set
/// a disc (slope window [0,1]) or its complement (window [1,2]); reports the
/// free-boundary radius, the contact-side equilibrium mass, and the volume
/// condition quadrature.
ConvergenceReport divisor_example_report(DivisorExample which);

/// Lelong slopes of divisor-constrained spaces: left-end Bergman-metric
/// slope of the vanishing-at-zero space on the degree-2 base equals one
/// exactly; also checks uniform convergence away from the divisor.
ConvergenceReport lelong_report(const std::vector<int>& ks);

/// C^{1,1} probes across grid refinements (wraps c11_probe).
ConvergenceReport regularity_report(const Weight& w, SlopeWindow window,
                                    const std::vector<int>& n_points_list);

/// Smooth compactly supported test profile (mollifier shape) for the
/// off-diagonal pairing.
GridFn test_profile(const VGrid& grid, double center, double halfwidth);

}  // namespace eqbk
