#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "eqbk/errors.hpp"

namespace eqbk {

using Mask = std::vector<std::uint8_t>;

/// Uniform grid on the log-modulus line v = ln|zeta|^2.
class VGrid {
 public:
  VGrid(double v_min, double v_max, int n_points)
      : v_min_(v_min), v_max_(v_max), n_(n_points) {
    if (!(std::isfinite(v_min) && std::isfinite(v_max)))
      throw Error("VGrid: endpoints must be finite");
    if (!(v_min < v_max)) throw Error("VGrid: v_min must be < v_max");
    if (n_points < 3) throw Error("VGrid: need at least 3 points");
  }

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  int n_points() const { return n_; }
  double step() const { return (v_max_ - v_min_) / (n_ - 1); }
  double node(int i) const { return v_min_ + i * step(); }

  /// Same endpoints, (n-1)*factor + 1 points.
  VGrid refined(int factor) const { return VGrid(v_min_, v_max_, (n_ - 1) * factor + 1); }

  bool operator==(const VGrid& o) const {
    return v_min_ == o.v_min_ && v_max_ == o.v_max_ && n_ == o.n_;
  }

 private:
  double v_min_, v_max_;
  int n_;
};

/// Per-node values of a function on a VGrid.
struct GridFn {
  VGrid grid;
  std::vector<double> values;

  GridFn(VGrid g, std::vector<double> vals) : grid(g), values(std::move(vals)) {
    if (static_cast<int>(values.size()) != grid.n_points())
      throw GridMismatchError("GridFn: value count does not match grid");
    for (double x : values)
      if (!std::isfinite(x)) throw Error("GridFn: non-finite value");
  }

  static GridFn sample(const VGrid& g, const std::function<double(double)>& f) {
    std::vector<double> vals(g.n_points());
    for (int i = 0; i < g.n_points(); ++i) vals[i] = f(g.node(i));
    return GridFn(g, std::move(vals));
  }

  double operator[](int i) const { return values[i]; }
  int size() const { return grid.n_points(); }

  /// Piecewise-linear evaluation, clamped to the grid range.
  double interp(double v) const {
    const double h = grid.step();
    double t = (v - grid.v_min()) / h;
    if (t <= 0) return values.front();
    if (t >= grid.n_points() - 1) return values.back();
    int i = static_cast<int>(t);
    double w = t - i;
    return values[i] * (1.0 - w) + values[i + 1] * w;
  }
};

inline void require_same_grid(const GridFn& a, const GridFn& b, const char* what) {
  if (!(a.grid == b.grid)) throw GridMismatchError(std::string(what) + ": grid mismatch");
}

/// Composite trapezoid over an entire grid function.
inline double trapezoid(const GridFn& f) {
  double s = 0.5 * (f.values.front() + f.values.back());
  for (int i = 1; i + 1 < f.size(); ++i) s += f.values[i];
  return s * f.grid.step();
}

/// Composite Simpson; the grid must have an odd number of points.
inline double simpson(const GridFn& f) {
  const int n = f.size();
  if (n % 2 == 0) throw Error("simpson: needs an odd number of points");
  double s = f.values.front() + f.values.back();
  for (int i = 1; i + 1 < n; ++i) s += f.values[i] * (i % 2 ? 4.0 : 2.0);
  return s * f.grid.step() / 3.0;
}

}  // namespace eqbk
