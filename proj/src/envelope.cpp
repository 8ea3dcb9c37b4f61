#include "eqbk/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqbk {

namespace {

// Lower convex hull of the graph {(v_i, f_i)}, v ascending.  Returns vertex
// indices; consecutive chord slopes strictly increase (collinear middle
// points are dropped).
std::vector<int> lower_hull(const GridFn& f) {
  const int n = f.size();
  std::vector<int> h;
  h.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double vi = f.grid.node(i), fi = f.values[i];
    while (h.size() >= 2) {
      const int a = h[h.size() - 2], b = h[h.size() - 1];
      const double va = f.grid.node(a), fa = f.values[a];
      const double vb = f.grid.node(b), fb = f.values[b];
      // keep b only if the chain bends strictly upward at b
      if ((fb - fa) * (vi - vb) < (fi - fb) * (vb - va)) break;
      h.pop_back();
    }
    h.push_back(i);
  }
  return h;
}

double contact_tolerance(double u) { return 1e-9 * (1.0 + std::abs(u)); }

}  // namespace

GridFn legendre_transform(const GridFn& f, const VGrid& slope_grid) {
  const auto hull = lower_hull(f);
  const int T = static_cast<int>(hull.size());
  std::vector<double> out(slope_grid.n_points());
  int t = 0;
  for (int b = 0; b < slope_grid.n_points(); ++b) {
    const double s = slope_grid.node(b);
    // the maximizer of s v - f(v) moves right as s grows
    while (t + 1 < T &&
           s * f.grid.node(hull[t + 1]) - f.values[hull[t + 1]] >=
               s * f.grid.node(hull[t]) - f.values[hull[t]])
      ++t;
    out[b] = s * f.grid.node(hull[t]) - f.values[hull[t]];
  }
  return GridFn(slope_grid, std::move(out));
}

EnvelopeResult constrained_envelope(const GridFn& u, SlopeWindow window) {
  window.validate();
  const int n = u.size();
  const auto hull = lower_hull(u);
  const int T = static_cast<int>(hull.size());
  const auto hv = [&](int t) { return u.grid.node(hull[t]); };
  const auto hq = [&](int t) { return u.values[hull[t]]; };

  // Dual domain clipped to the window: its endpoints plus every hull slope
  // strictly inside.  These are exactly the breakpoints of u* on [lo, hi].
  std::vector<double> breaks;
  breaks.reserve(T + 1);
  breaks.push_back(window.lo);
  for (int t = 0; t + 1 < T; ++t) {
    const double s = (hq(t + 1) - hq(t)) / (hv(t + 1) - hv(t));
    if (s > window.lo && s < window.hi) breaks.push_back(s);
  }
  breaks.push_back(window.hi);
  const int B = static_cast<int>(breaks.size());

  // Forward transform: u*(s) = max_i (s v_i - u_i) at each breakpoint.
  std::vector<double> fstar(B);
  for (int b = 0, t = 0; b < B; ++b) {
    const double s = breaks[b];
    while (t + 1 < T && s * hv(t + 1) - hq(t + 1) >= s * hv(t) - hq(t)) ++t;
    fstar[b] = s * hv(t) - hq(t);
  }

  // Backward transform at the original nodes: u_e(v) = max_b (v s_b - u*(s_b)).
  std::vector<double> ue(n);
  for (int i = 0, b = 0; i < n; ++i) {
    const double v = u.grid.node(i);
    while (b + 1 < B &&
           v * breaks[b + 1] - fstar[b + 1] >= v * breaks[b] - fstar[b])
      ++b;
    ue[i] = v * breaks[b] - fstar[b];
  }
  GridFn u_e(u.grid, std::move(ue));

  Mask contact(n);
  for (int i = 0; i < n; ++i)
    contact[i] = (u.values[i] - u_e.values[i] <= contact_tolerance(u.values[i])) ? 1 : 0;

  const double h = u.grid.step();
  std::vector<double> slope(n);
  for (int i = 0; i + 1 < n; ++i) slope[i] = (u_e.values[i + 1] - u_e.values[i]) / h;
  slope[n - 1] = slope[n - 2];

  GridFn dual = legendre_transform(u, VGrid(window.lo, window.hi, n));

  return EnvelopeResult{std::move(u_e), std::move(contact),
                        std::move(dual), GridFn(u.grid, std::move(slope)), window};
}

GridFn envelope_oracle(const GridFn& u, SlopeWindow window) {
  window.validate();
  const int n = u.size();
  const auto v = [&](int i) { return u.grid.node(i); };

  // Tangency points of the two extreme admissible slopes, by brute scans.
  // Leftmost minimizer for the low slope, rightmost for the high one.
  int iA = 0, iB = 0;
  double bestA = std::numeric_limits<double>::infinity();
  double bestB = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double cA = u.values[i] - window.lo * v(i);
    const double cB = u.values[i] - window.hi * v(i);
    if (cA < bestA) {
      bestA = cA;
      iA = i;
    }
    if (cB <= bestB) {
      bestB = cB;
      iB = i;
    }
  }

  // Monotone chain over the points between the tangencies.
  std::vector<int> hull;
  for (int i = iA; i <= iB; ++i) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      const double cross = (v(b) - v(a)) * (u.values[i] - u.values[a]) -
                           (v(i) - v(a)) * (u.values[b] - u.values[a]);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  std::vector<double> out(n);
  int t = 0;
  const int T = static_cast<int>(hull.size());
  for (int i = 0; i < n; ++i) {
    const double x = v(i);
    if (x <= v(iA)) {
      out[i] = u.values[iA] + window.lo * (x - v(iA));
    } else if (x >= v(iB)) {
      out[i] = u.values[iB] + window.hi * (x - v(iB));
    } else {
      while (t + 1 < T && v(hull[t + 1]) < x) ++t;
      const int a = hull[t], b = hull[std::min(t + 1, T - 1)];
      if (a == b || v(b) == v(a)) {
        out[i] = u.values[a];
      } else {
        const double w = (x - v(a)) / (v(b) - v(a));
        out[i] = u.values[a] * (1.0 - w) + u.values[b] * w;
      }
    }
  }
  return GridFn(u.grid, std::move(out));
}

Mask contact_set(const GridFn& u, const GridFn& u_e, double tol) {
  require_same_grid(u, u_e, "contact_set");
  if (!(tol > 0)) throw Error("contact_set: tol must be positive");
  Mask mask(u.size());
  for (int i = 0; i < u.size(); ++i)
    mask[i] = (u.values[i] - u_e.values[i] <= tol) ? 1 : 0;
  return mask;
}

EquilibriumMeasure equilibrium_measure(const EnvelopeResult& res) {
  const GridFn& ue = res.u_e;
  const int n = ue.size();
  const double h = ue.grid.step();
  std::vector<double> density(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    const double dd = (ue.values[i + 1] - 2.0 * ue.values[i] + ue.values[i - 1]) / (h * h);
    if (dd < -1e-6)
      throw ConvexityViolationError(
          "equilibrium_measure: second difference below -1e-6; envelope is not convex");
    density[i] = std::max(dd, 0.0);
  }
  // End-slope defects against the window edges carry the tail + pole mass,
  // so the total is hi - lo regardless of the grid extent.
  const double slope_in = (ue.values[1] - ue.values[0]) / h;
  const double slope_out = (ue.values[n - 1] - ue.values[n - 2]) / h;
  const double atom_left = std::max(slope_in - res.window.lo, 0.0);
  const double atom_right = std::max(res.window.hi - slope_out, 0.0);
  return EquilibriumMeasure{GridFn(ue.grid, std::move(density)), atom_left, atom_right};
}

std::vector<C11Row> c11_probe(const std::function<double(double)>& obstacle,
                              SlopeWindow window, const std::vector<VGrid>& grids) {
  std::vector<C11Row> rows;
  rows.reserve(grids.size());
  for (const VGrid& g : grids) {
    const GridFn u = GridFn::sample(g, obstacle);
    const EnvelopeResult res = constrained_envelope(u, window);
    const double h = g.step();
    const int n = g.n_points();

    double max_d2 = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double dd =
          std::abs(res.u_e.values[i + 1] - 2.0 * res.u_e.values[i] + res.u_e.values[i - 1]) /
          (h * h);
      max_d2 = std::max(max_d2, dd);
    }

    // Discrete slope jump across each contact transition; spans the kink cell.
    double jump = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      if (res.contact[i] != res.contact[i + 1]) {
        const int left = std::max(i - 1, 0);
        const int right = std::min(i + 1, n - 2);
        jump = std::max(jump, std::abs(res.slope.values[right] - res.slope.values[left]));
      }
    }
    rows.push_back(C11Row{n, h, max_d2, jump});
  }
  return rows;
}

}  // namespace eqbk
