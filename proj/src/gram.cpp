#include "eqbk/gram.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace eqbk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kCondLimit = 1e14;

inline double simpson_coeff(int i, int n) {
  if (i == 0 || i == n - 1) return 1.0;
  return (i % 2) ? 4.0 : 2.0;
}

}  // namespace

GramResult gram_bergman(const std::function<double(double, double)>& phi,
                        int degree_m, int k, int j_lo, int j_hi,
                        const PolarQuadrature& quad, const VGrid& eval_grid) {
  if (k < 1 || k > 40)
    throw Error("gram_bergman: k must be in [1, 40]; monomial Gram matrices are "
                "exponentially ill-conditioned beyond that");
  if (!(0 <= j_lo && j_lo <= j_hi && j_hi <= degree_m * k))
    throw Error("gram_bergman: bad index window");
  const int nv = quad.vgrid.n_points();
  if (nv % 2 == 0) throw Error("gram_bergman: v-grid needs an odd point count");
  const int nth = quad.n_theta;
  if (nth <= 2 * j_hi - 2 * j_lo)
    throw Error("gram_bergman: n_theta too small for the monomial phases");

  const int nj = j_hi - j_lo + 1;
  const int np = 2 * (j_hi - j_lo) + 1;  // p = j + l, offset by 2 j_lo
  const double v_min = quad.vgrid.v_min();
  const double h = quad.vgrid.step();

  // W(v,th) = -k phi(v,th) + ln g''(v); Gram entry exponents are
  // E_p(v,th) = (p/2) v + W(v,th) with p = j + l.
  Eigen::MatrixXd W(nth, nv);
  std::vector<double> wmax(nv, kNegInf);
  for (int i = 0; i < nv; ++i) {
    const double v = v_min + i * h;
    const double lg = std::log(fs_density(v));
    for (int t = 0; t < nth; ++t) {
      const double th = 2.0 * M_PI * t / nth;
      const double val = -static_cast<double>(k) * phi(v, th) + lg;
      W(t, i) = val;
      wmax[i] = std::max(wmax[i], val);
    }
  }

  // Per-total-degree max exponent M_p = max over nodes of E_p.
  std::vector<double> M(np, kNegInf);
  for (int pi = 0; pi < np; ++pi) {
    const double p = 2 * j_lo + pi;
    for (int i = 0; i < nv; ++i)
      M[pi] = std::max(M[pi], 0.5 * p * (v_min + i * h) + wmax[i]);
  }

  // Scaled radial profiles A(p, th) = Simpson_v exp(E_p - M_p).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(np, nth);
  for (int t = 0; t < nth; ++t) {
    for (int i = 0; i < nv; ++i) {
      const double sw = simpson_coeff(i, nv) * h / 3.0;
      const double v = v_min + i * h;
      const double w = W(t, i);
      for (int pi = 0; pi < np; ++pi) {
        const double e = 0.5 * (2 * j_lo + pi) * v + w - M[pi];
        if (e > -745.0) A(pi, t) += sw * std::exp(e);
      }
    }
  }

  // Diagonally rescaled Hermitian Gram matrix.  The raw entries are
  // G_{jl} = e^{M_{j+l}} * avg_t e^{i (j-l) th_t} A(j+l, t); the exponent
  // shift M_{j+l} - (M_{2j} + M_{2l})/2 is <= 0 because M is convex in p.
  std::vector<double> log_diag(nj);
  for (int a = 0; a < nj; ++a) {
    double d = 0;
    for (int t = 0; t < nth; ++t) d += A(2 * a, t);
    d /= nth;
    if (!(d > 0))
      throw ConditioningError("gram_bergman: vanishing diagonal norm",
                              std::numeric_limits<double>::infinity());
    log_diag[a] = M[2 * a] + std::log(d);
  }
  Eigen::MatrixXcd Gt(nj, nj);
  for (int a = 0; a < nj; ++a) {
    for (int b = a; b < nj; ++b) {
      const int d = a - b;  // j - l with j = j_lo + a, l = j_lo + b
      std::complex<double> acc(0.0, 0.0);
      for (int t = 0; t < nth; ++t) {
        const double th = 2.0 * M_PI * t / nth;
        acc += A(a + b, t) * std::complex<double>(std::cos(d * th), std::sin(d * th));
      }
      acc /= nth;
      const double scale = std::exp(M[a + b] - 0.5 * (log_diag[a] + log_diag[b]));
      Gt(a, b) = acc * scale;
      Gt(b, a) = std::conj(Gt(a, b));
    }
  }

  // Condition estimate of the raw matrix: diagonal spread times the
  // conditioning of the rescaled form.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gt);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  double log_cond;
  if (!(lmin > 0) || !std::isfinite(lmax)) {
    log_cond = std::numeric_limits<double>::infinity();
  } else {
    double dmin = log_diag[0], dmax = log_diag[0];
    for (double ld : log_diag) {
      dmin = std::min(dmin, ld);
      dmax = std::max(dmax, ld);
    }
    log_cond = (dmax - dmin) + std::log(lmax / lmin);
  }
  const double cond = std::exp(std::min(log_cond, 700.0));
  if (!(log_cond < std::log(kCondLimit)))
    throw ConditioningError(
        "gram_bergman: Gram matrix numerically singular (condition estimate " +
            std::to_string(cond) + ")",
        cond);

  Eigen::LLT<Eigen::MatrixXcd> llt(Gt);
  if (llt.info() != Eigen::Success)
    throw ConditioningError("gram_bergman: Cholesky factorization failed", cond);

  // B(x) along theta = 0 from the inverse quadratic form:
  //   B = b* G^{-1} b e^{-k phi},  b_j = e^{j v / 2}.
  const int n = eval_grid.n_points();
  std::vector<double> log_b(n), metric(n);
  Eigen::VectorXcd bhat(nj);
  for (int i = 0; i < n; ++i) {
    const double v = eval_grid.node(i);
    double qmax = kNegInf;
    for (int a = 0; a < nj; ++a)
      qmax = std::max(qmax, 0.5 * (j_lo + a) * v - 0.5 * log_diag[a]);
    for (int a = 0; a < nj; ++a) {
      const double e = 0.5 * (j_lo + a) * v - 0.5 * log_diag[a] - qmax;
      bhat(a) = std::complex<double>(e > -745.0 ? std::exp(e) : 0.0, 0.0);
    }
    const Eigen::VectorXcd y = llt.solve(bhat);
    const double q = std::real(bhat.dot(y));
    const double lq = std::log(std::max(q, std::numeric_limits<double>::min()));
    const double log_kdiag = lq + 2.0 * qmax;
    metric[i] = log_kdiag / k;
    log_b[i] = log_kdiag - k * phi(v, 0.0);
  }
  return GramResult{KernelEval{GridFn(eval_grid, std::move(log_b)),
                               GridFn(eval_grid, std::move(metric))},
                    cond};
}

GramResult gram_bergman_radial(const Weight& w, int k, int j_lo, int j_hi,
                               const VGrid& eval_grid) {
  const PolarQuadrature quad{VGrid(-40.0, 40.0, 16385),
                             std::max(2 * w.degree_m() * k + 1, 48)};
  return gram_bergman([&w](double v, double) { return w.potential(v); },
                      w.degree_m(), k, j_lo, j_hi, quad, eval_grid);
}

}  // namespace eqbk
