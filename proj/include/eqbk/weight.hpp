#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "eqbk/grid.hpp"

namespace eqbk {

/// ln(1 + e^v) without overflow.
inline double log1pexp(double v) {
  return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v)));
}

/// e^v / (1 + e^v), the logistic sigmoid.
inline double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

/// Density of the reference volume form pushed to the v-line:
///
///   g''(v) = e^v / (1 + e^v)^2,   g(v) = ln(1 + e^v),
///
/// normalized so the total integral over the real line is one.
/// Written to be exactly symmetric under v -> -v.
inline double fs_density(double v) {
  const double t = std::exp(-std::abs(v));
  const double q = 1.0 + t;
  return t / (q * q);
}

/// Standard smooth mollifier bump amplitude * exp(1 - 1/(1 - t^2)),
/// t = (v - center)/halfwidth, identically zero for |t| >= 1.
struct Bump {
  double amplitude = 0.0;
  double center = 0.0;
  double halfwidth = 1.0;

  // chi, chi', chi'' at v.  The exp factor underflows long before the
  // rational prefactors blow up, so values below the cutoff are exact zeros
  // in double precision.
  void eval(double v, double& chi, double& d1, double& d2) const {
    chi = d1 = d2 = 0.0;
    const double t = (v - center) / halfwidth;
    const double s = 1.0 - t * t;
    if (s <= 1.5e-3) return;  // exp(-1/s) underflows: true values < 1e-250
    const double phi = std::exp(1.0 - 1.0 / s);
    const double psi = -2.0 * t / (s * s);
    const double dpsi = -2.0 * (1.0 + 3.0 * t * t) / (s * s * s);
    chi = amplitude * phi;
    d1 = amplitude * phi * psi / halfwidth;
    d2 = amplitude * phi * (psi * psi + dpsi) / (halfwidth * halfwidth);
  }
};

/// Radial Hermitian metric on O(m) over the Riemann sphere, represented by
/// its potential on the v-line:
///
///   u(v) = m * ln(1 + e^v) + chi(v),
///
/// with chi a compactly supported smooth bump.  u' runs from 0 to m, so the
/// total curvature mass equals the degree m.
class Weight {
 public:
  explicit Weight(int degree_m, std::optional<Bump> bump = std::nullopt)
      : m_(degree_m), bump_(bump) {
    if (degree_m < 1) throw Error("Weight: degree_m must be >= 1");
    if (bump_ && !(bump_->halfwidth > 0))
      throw Error("Weight: bump halfwidth must be positive");
  }

  int degree_m() const { return m_; }
  const std::optional<Bump>& bump() const { return bump_; }

  double potential(double v) const {
    double c = 0, d1 = 0, d2 = 0;
    if (bump_) bump_->eval(v, c, d1, d2);
    return m_ * log1pexp(v) + c;
  }

  double slope(double v) const {
    double c = 0, d1 = 0, d2 = 0;
    if (bump_) bump_->eval(v, c, d1, d2);
    return m_ * logistic(v) + d1;
  }

  double curvature(double v) const {
    double c = 0, d1 = 0, d2 = 0;
    if (bump_) bump_->eval(v, c, d1, d2);
    return m_ * fs_density(v) + d2;
  }

  static Weight from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  int m_;
  std::optional<Bump> bump_;
};

/// u, u' or u'' by closed-form differentiation.
double eval_potential(const Weight& w, double v, int order);

/// Nodes where the curvature u'' exceeds eps: the grid realization of the
/// positivity set X(0).
Mask positive_set(const Weight& w, const VGrid& grid, double eps);

/// u'(v_max) - u'(v_min); equals degree_m once the grid is wide enough.
/// Throws GridTooNarrowError when the end slopes have not flattened out.
double curvature_mass(const Weight& w, const VGrid& grid);

}  // namespace eqbk
