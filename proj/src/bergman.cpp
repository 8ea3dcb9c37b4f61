#include "eqbk/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqbk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// All norm integrands share the v-independent part of the exponent:
//   E_j(v) = j v + base(v),   base(v) = -k u(v) + ln g''(v).
struct NormIntegrand {
  const Weight* w;
  int k;
  double base(double v) const {
    return -static_cast<double>(k) * w->potential(v) + std::log(fs_density(v));
  }
};

// Composite Simpson weight by absolute node index (grid has odd n).
inline double simpson_coeff(int i, int n) {
  if (i == 0 || i == n - 1) return 1.0;
  return (i % 2) ? 4.0 : 2.0;
}

// log integral of exp(j v + base(v)) over the index range [ia, ib] of a
// grid with n nodes and spacing h, with the max exponent factored out.
double log_simpson_window(const std::vector<double>& base, double v_min, double h,
                          int n, int j, int ia, int ib) {
  double m = kNegInf;
  for (int i = ia; i <= ib; ++i) m = std::max(m, j * (v_min + i * h) + base[i]);
  long double s = 0.0L;
  for (int i = ia; i <= ib; ++i) {
    const double e = j * (v_min + i * h) + base[i] - m;
    if (e > -745.0) s += simpson_coeff(i, n) * static_cast<long double>(std::exp(e));
  }
  return m + std::log(static_cast<double>(s) * (h / 3.0));
}

}  // namespace

LogNorms monomial_log_norms(const SectionSpace& space, const VGrid& grid) {
  const NormIntegrand f{&space.weight, space.k};
  const int j_lo = space.j_lo, j_hi = space.j_hi, nj = space.dim();

  // Simpson needs an odd point count; widen by one node if necessary.
  const int n0 = grid.n_points() % 2 ? grid.n_points() : grid.n_points() + 1;
  const double v_min = grid.v_min();
  const double h0 = (grid.v_max() - v_min) / (n0 - 1);

  std::vector<double> base0(n0);
  for (int i = 0; i < n0; ++i) base0[i] = f.base(v_min + i * h0);

  // Per-index essential windows (exponent within 50 of its peak, padded by
  // two units) plus the endpoint truncation precondition: both ends must sit
  // at least 92 below the peak, i.e. roughly forty decimal digits down.
  struct JState {
    double lo_v, hi_v;
    double log_i = 0.0;
    double last_delta = std::numeric_limits<double>::infinity();
    bool done = false;
  };
  std::vector<JState> st(nj);
  const int pad = std::max(1, static_cast<int>(std::ceil(2.0 / h0)));
  for (int idx = 0; idx < nj; ++idx) {
    const int j = j_lo + idx;
    double m = kNegInf;
    for (int i = 0; i < n0; ++i) m = std::max(m, j * (v_min + i * h0) + base0[i]);
    const double e_left = j * v_min + base0[0];
    const double e_right = j * (v_min + (n0 - 1) * h0) + base0[n0 - 1];
    if (e_left > m - 92.0 || e_right > m - 92.0)
      throw GridTooNarrowError(
          "monomial_log_norms: integrand for index j=" + std::to_string(j) +
          " is truncated at the grid ends; widen the quadrature grid");
    int ia = 0, ib = n0 - 1;
    while (ia < n0 && j * (v_min + ia * h0) + base0[ia] < m - 50.0) ++ia;
    while (ib >= 0 && j * (v_min + ib * h0) + base0[ib] < m - 50.0) --ib;
    ia = std::max(0, ia - pad);
    ib = std::min(n0 - 1, ib + pad);
    st[idx].lo_v = v_min + ia * h0;
    st[idx].hi_v = v_min + ib * h0;
    st[idx].log_i = log_simpson_window(base0, v_min, h0, n0, j, ia, ib);
  }

  // Refine by grid doubling until the relative change per index drops below
  // 1e-12, or stalls at the double-precision floor for large j v exponents.
  constexpr int kMaxLevel = 11;
  int pending = nj;
  for (int level = 1; level <= kMaxLevel && pending > 0; ++level) {
    const int n = (n0 - 1) * (1 << level) + 1;
    const double h = (grid.v_max() - v_min) / (n - 1);
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i) base[i] = f.base(v_min + i * h);
    for (int idx = 0; idx < nj; ++idx) {
      if (st[idx].done) continue;
      const int j = j_lo + idx;
      const int ia = std::max(0, static_cast<int>(std::floor((st[idx].lo_v - v_min) / h)));
      const int ib = std::min(n - 1, static_cast<int>(std::ceil((st[idx].hi_v - v_min) / h)));
      const double li = log_simpson_window(base, v_min, h, n, j, ia, ib);
      const double delta = std::abs(li - st[idx].log_i);
      st[idx].log_i = li;
      if (delta <= 1e-12 ||
          (level >= 2 && delta <= 1e-9 && delta > 0.25 * st[idx].last_delta)) {
        st[idx].done = true;
        --pending;
      }
      st[idx].last_delta = delta;
    }
  }

  LogNorms norms{j_lo, j_hi, {}};
  norms.log_c2.resize(nj);
  for (int idx = 0; idx < nj; ++idx) norms.log_c2[idx] = st[idx].log_i;
  return norms;
}

namespace {

// ln sum_j exp(j v - log_c2[j]);  the exponent of K_k(x,x) before weighting.
double log_kernel_diag(const LogNorms& norms, double v) {
  double m = kNegInf;
  for (int idx = 0; idx < norms.count(); ++idx)
    m = std::max(m, (norms.j_lo + idx) * v - norms.log_c2[idx]);
  long double s = 0.0L;
  for (int idx = 0; idx < norms.count(); ++idx) {
    const double e = (norms.j_lo + idx) * v - norms.log_c2[idx] - m;
    if (e > -745.0) s += std::exp(e);
  }
  return m + std::log(static_cast<double>(s));
}

}  // namespace

KernelEval bergman_function(const SectionSpace& space, const LogNorms& norms,
                            const VGrid& eval_grid) {
  if (space.k < 1) throw Error("bergman_function: k must be >= 1");
  if (norms.j_lo != space.j_lo || norms.j_hi != space.j_hi)
    throw Error("bergman_function: norms do not match the section space");
  const int n = eval_grid.n_points();
  std::vector<double> log_b(n), metric(n);
  for (int i = 0; i < n; ++i) {
    const double v = eval_grid.node(i);
    const double lk = log_kernel_diag(norms, v);
    metric[i] = lk / space.k;
    log_b[i] = lk - space.k * space.weight.potential(v);
  }
  return KernelEval{GridFn(eval_grid, std::move(log_b)),
                    GridFn(eval_grid, std::move(metric))};
}

double log_bergman_at(const SectionSpace& space, const LogNorms& norms, double v) {
  return log_kernel_diag(norms, v) - space.k * space.weight.potential(v);
}

double bergman_metric_at(const SectionSpace& space, const LogNorms& norms, double v) {
  return log_kernel_diag(norms, v) / space.k;
}

double dimension_identity(const SectionSpace& space, const KernelEval& eval) {
  const GridFn& lb = eval.log_B;
  GridFn integrand = GridFn::sample(lb.grid, [&](double v) { return fs_density(v); });
  for (int i = 0; i < lb.size(); ++i) integrand.values[i] *= std::exp(lb.values[i]);
  const double value =
      (lb.size() % 2) ? simpson(integrand) : trapezoid(integrand);
  const double dim = space.dim();
  if (std::abs(value - dim) > 1e-6 * dim)
    throw ToleranceViolationError(
        "dimension_identity: integral " + std::to_string(value) + " vs dimension " +
        std::to_string(dim) + " (quadrature grid too narrow or norms are wrong)");
  return value;
}

double kernel_offdiag_sq(const SectionSpace& space, const LogNorms& norms,
                         PolarPoint x, PolarPoint y) {
  const double half = 0.5 * (x.v + y.v);
  const double dth = x.theta - y.theta;
  double m = kNegInf;
  for (int idx = 0; idx < norms.count(); ++idx)
    m = std::max(m, (norms.j_lo + idx) * half - norms.log_c2[idx]);
  long double re = 0.0L, im = 0.0L;
  for (int idx = 0; idx < norms.count(); ++idx) {
    const int j = norms.j_lo + idx;
    const double e = j * half - norms.log_c2[idx] - m;
    if (e <= -745.0) continue;
    const double t = std::exp(e);
    re += t * std::cos(j * dth);
    im += t * std::sin(j * dth);
  }
  const double mod2 = static_cast<double>(re * re + im * im);
  if (mod2 == 0.0) return 0.0;
  const double log_val = std::log(mod2) + 2.0 * m -
                         space.k * (space.weight.potential(x.v) + space.weight.potential(y.v));
  return std::exp(log_val);
}

GridFn bergman_measure(const KernelEval& eval) {
  const GridFn& f = eval.metric;
  const int n = f.size();
  const double h = f.grid.step();
  std::vector<double> density(n, 0.0);
  for (int i = 1; i + 1 < n; ++i)
    density[i] = (f.values[i + 1] - 2.0 * f.values[i] + f.values[i - 1]) / (h * h);
  return GridFn(f.grid, std::move(density));
}

double lelong_slope(const KernelEval& eval, GridEnd end) {
  const GridFn& f = eval.metric;
  const int n = f.size();
  const double h = f.grid.step();
  if (end == GridEnd::Left) return (f.values[1] - f.values[0]) / h;
  return (f.values[n - 1] - f.values[n - 2]) / h;
}

}  // namespace eqbk
