#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "wigstat/entry_law.hpp"
#include "wigstat/probe.hpp"
#include "wigstat/quadrature.hpp"
#include "wigstat/test_function.hpp"

namespace wigstat {

/// Separation below which a divided difference falls back to the midpoint
/// derivative: 1e-6 * (2w).
inline double divided_difference_threshold(double w) { return 1e-6 * 2.0 * w; }

double divided_difference(const TestFunction& phi, double lambda1, double lambda2, double eps);

/// (1/2pi^2) double integral of (dphi/dlambda)^2 (4w^2 - l1 l2) against the
/// arcsine weights: the GOE limit variance of Tr phi(M).
double v_n_goe(const TestFunction& phi, const QuadratureRule& cheb1);
/// Double integral of (dphi)^2 rho rho: the GOE limit variance of sqrt(n) phi(M)_jj.
double v_jj_goe(const TestFunction& phi, const QuadratureRule& cheb2);

/// Polarized (bilinear) versions of the two forms above.
double v_n_bilinear(const TestFunction& phi1, const TestFunction& phi2, const QuadratureRule& cheb1);
double v_jj_bilinear(const TestFunction& phi1, const TestFunction& phi2,
                     const QuadratureRule& cheb2);

/// GOE limit covariance T_A^2 B_N + (T_AC/2 - T_A^2) B_jj.
double c_goe_covariance(const TestFunction& phi1, const TestFunction& phi2, double t_a,
                        double t_ac, const Quadratures& q);

/// Third-cumulant correction. The K^(2) kernel 2w^4/(4w^2 - l^2) times rho_sc
/// is integrated as w^2/pi against the arcsine weight.
double c_kappa3(const TestFunction& phi1, const TestFunction& phi2, double kappa3, double k1,
                double k2, const Quadratures& q);

/// Fourth-cumulant correction.
double c_kappa4(const TestFunction& phi1, const TestFunction& phi2, double kappa4, double k3,
                double t_a, const Quadratures& q);

/// w^{-2} int phi(mu) mu rho_sc(mu) dmu; the limit law's cumulants are
/// kappa_p A_p c_phi^p.
double c_phi(const TestFunction& phi, const QuadratureRule& cheb2);

/// Variance correction for diagonal variance w_2 w^2 instead of 2 w^2.
double w2_correction(const TestFunction& phi, double diag_multiplier, double k3, double t_a,
                     const Quadratures& q);

struct LimitLaw {
  double v_n = 0.0;
  double v_jj = 0.0;
  double v_goe = 0.0;
  double c_k3 = 0.0;
  double c_k4 = 0.0;
  double v_w = 0.0;
  double c_phi = 0.0;
  /// kappa_p A_p c_phi^p for p = 3..P.
  std::vector<double> tail;
  /// |kappa_p| max(2, w_2)^{p/2} |c_phi|^p for p = P+1..P+extension, the
  /// majorant of the truncated part of the series.
  std::vector<double> tail_bound_coefficients;
  std::optional<double> w2_corr;
  double diag_multiplier = 2.0;
  ProbeFunctionals functionals;

  int max_order() const { return static_cast<int>(tail.size()) + 2; }
  /// Limit variance of xi including the diagonal-variance correction.
  double variance() const { return v_w + w2_corr.value_or(0.0); }
};

inline constexpr int kTailBoundExtension = 12;

/// Assembles the full limit law of xi for `phi`, entry law and probe
/// functionals (which must carry A_p up to the law's cumulant order).
LimitLaw v_w(const TestFunction& phi, const EntryLaw& law, const ProbeFunctionals& functionals,
             const Quadratures& q, double diag_multiplier = 2.0,
             int tail_extension = kTailBoundExtension);

struct LogCfValue {
  std::complex<double> value;
  double tail_bound = 0.0;
  // Terms of the majorant are not decreasing at the truncation order.
  bool divergent = false;
  bool flagged = false;
  /// Limit characteristic function. When the probe's A_p are power sums of
  /// known atoms the whole cumulant series is summed through the entry law's
  /// characteristic function, which stays valid beyond the series' radius of
  /// convergence; otherwise exp(value).
  std::complex<double> cf;
  bool resummed = false;
};

/// -x^2 V/2 + sum_p kappa_p A_p (i x c_phi)^p / p!, truncated at P, with the
/// truncation majorant at x.
LogCfValue log_cf(double x, const LimitLaw& limit, const EntryLaw& law, double tolerance = 1e-3);

}  // namespace wigstat
