#pragma once

#include <vector>

#include "eqbk/grid.hpp"
#include "eqbk/weight.hpp"

namespace eqbk {

/// Weighted polynomial section space at tensor power k: the monomials
/// zeta^j with j in [j_lo, j_hi].  The full space has j in [0, m*k];
/// vanishing to order >= k at zeta = 0 keeps j >= k, at infinity j <= (m-1)k.
struct SectionSpace {
  Weight weight;
  int k;
  int j_lo;
  int j_hi;

  SectionSpace(Weight w, int k_, int lo, int hi)
      : weight(std::move(w)), k(k_), j_lo(lo), j_hi(hi) {
    if (k < 0) throw Error("SectionSpace: k must be >= 0");
    if (!(0 <= j_lo && j_lo <= j_hi && j_hi <= weight.degree_m() * k))
      throw Error("SectionSpace: need 0 <= j_lo <= j_hi <= m*k");
  }

  int dim() const { return j_hi - j_lo + 1; }

  static SectionSpace full(Weight w, int k) {
    int hi = w.degree_m() * k;
    return SectionSpace(std::move(w), k, 0, hi);
  }
  static SectionSpace vanishing_at_zero(Weight w, int k) {
    int hi = w.degree_m() * k;
    return SectionSpace(std::move(w), k, k, hi);
  }
  static SectionSpace vanishing_at_infinity(Weight w, int k) {
    int hi = (w.degree_m() - 1) * k;
    return SectionSpace(std::move(w), k, 0, hi);
  }
};

/// ln c_j^2 for the squared monomial norms
///
///   c_j^2 = int exp(j v - k u(v)) g''(v) dv,
///
/// indexed j_lo..j_hi, stored in log scale.
struct LogNorms {
  int j_lo;
  int j_hi;
  std::vector<double> log_c2;

  double at(int j) const { return log_c2[j - j_lo]; }
  int count() const { return j_hi - j_lo + 1; }
};

/// Diagonal kernel data on a grid: log_B = ln B_k and the k-th Bergman
/// metric (1/k) ln K_k(x,x) in the standard trivialization.
struct KernelEval {
  GridFn log_B;
  GridFn metric;
};

struct PolarPoint {
  double v;
  double theta;
};

enum class GridEnd { Left, Right };

/// Squared monomial norms by log-domain quadrature: the integrand exponent
/// E_j(v) = j v - k u(v) + ln g''(v) is summed with its maximum factored
/// out, composite Simpson, refining by grid doubling until the relative
/// change drops below 1e-12.  Requires E_j at both grid endpoints to sit at
/// least 92 below the peak (throws GridTooNarrowError otherwise).
LogNorms monomial_log_norms(const SectionSpace& space, const VGrid& grid);

/// ln B_k and the Bergman metric on eval_grid, via stable log-sum-exp.
KernelEval bergman_function(const SectionSpace& space, const LogNorms& norms,
                            const VGrid& eval_grid);

/// Pointwise versions for probe points off the grid.
double log_bergman_at(const SectionSpace& space, const LogNorms& norms, double v);
double bergman_metric_at(const SectionSpace& space, const LogNorms& norms, double v);

/// int B_k dref over the grid carried by eval; must equal the space
/// dimension within 1e-6 relative (throws ToleranceViolationError if not).
/// Pass an eval computed on a wide grid so the reference tails are captured.
double dimension_identity(const SectionSpace& space, const KernelEval& eval);

/// |K_k(x,y)|^2_{k phi}: modulus handled in log scale, phases accumulated
/// per monomial index.
double kernel_offdiag_sq(const SectionSpace& space, const LogNorms& norms,
                         PolarPoint x, PolarPoint y);

/// Second-difference density of the Bergman metric (the k-th Bergman
/// volume form on the v-line).
GridFn bergman_measure(const KernelEval& eval);

/// One-sided difference quotient of the Bergman metric at a grid end; the
/// left slope of a divisor-constrained space recovers the Lelong number
/// j_lo / k.
double lelong_slope(const KernelEval& eval, GridEnd end);

}  // namespace eqbk
