#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace wigstat {

using cplx = std::complex<double>;

/// Uniform grid t_k = k h on [0, T] with T/h integral and h <= 0.05.
class TimeGrid {
 public:
  TimeGrid(double horizon, double step);

  double horizon() const { return horizon_; }
  double step() const { return step_; }
  int intervals() const { return intervals_; }
  std::size_t size() const { return static_cast<std::size_t>(intervals_) + 1; }
  double t(std::size_t k) const { return static_cast<double>(k) * step_; }
  /// Same step, horizon extended by `extra` (a multiple of the step).
  TimeGrid extended(double extra) const;
  /// Index of t on the grid; throws if t is not a node.
  std::size_t index_of(double t) const;

  bool operator==(const TimeGrid& other) const {
    return intervals_ == other.intervals_ && step_ == other.step_;
  }

 private:
  double horizon_;
  double step_;
  int intervals_;
};

inline constexpr double kMaxGridStep = 0.05;

class GridFunction {
 public:
  explicit GridFunction(TimeGrid grid);
  GridFunction(TimeGrid grid, std::vector<cplx> values);

  static GridFunction sample(const TimeGrid& grid, const std::function<cplx(double)>& f);

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  cplx& operator[](std::size_t k) { return values_[k]; }
  const cplx& operator[](std::size_t k) const { return values_[k]; }
  const std::vector<cplx>& values() const { return values_; }

 private:
  TimeGrid grid_;
  std::vector<cplx> values_;
};

/// sup_k |f_k - g_k| over the shared grid.
double sup_distance(const GridFunction& f, const GridFunction& g);

/// Fourier transform of the semicircle density, by semicircle-weight
/// quadrature of cos(t lambda).
double v_of_t(double t, double w, int order = 128);
GridFunction v_on_grid(const TimeGrid& grid, double w, int order = 128);

/// Stieltjes transform of rho_sc: the root of w^2 v^2 + z v + 1 = 0 with
/// Im v of the same sign as Im z. Rejects Im z = 0.
cplx stieltjes_v(cplx z, double w);

/// Trapezoidal product integration of int_0^t f(t - s) g(s) ds.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

/// Cumulative trapezoid int_0^t f.
GridFunction integrate_cumulative(const GridFunction& f);

/// Forward solution of P(t) + c int_0^t dt3 int_0^t3 Q(t3 - t4) P(t4) dt4 = R(t)
/// with trapezoidal product integration in both integrals.
GridFunction solve_volterra(const GridFunction& q, const GridFunction& r, double coefficient);

struct FourierTransformValue {
  cplx value;
  double tail_bound = 0.0;
};

/// i^{-1} int_0^T e^{-izt} f(t) dt on f's grid, for Im z < 0. The tail bound
/// assumes |f| <= 1 beyond the horizon.
FourierTransformValue generalized_fourier(const GridFunction& f, cplx z);

struct LemmaErrors {
  double f1 = 0.0;
  std::vector<double> t2_values;
  std::vector<double> f2;  // one per t2 value
  std::vector<double> f3;
  double f3_at_zero = 0.0;  // sup |P(t1, 0)|

  double max_error() const;
};

/// Solves the three auxiliary equations on `grid` and reports the sup
/// deviation of each solution from its closed form.
LemmaErrors verify_lemma1(const TimeGrid& grid, double w, const std::vector<double>& t2_values,
                          int order = 128);

/// Closed form of F3 by double arcsine quadrature with divided differences
/// of e^{it lambda}.
double f3_closed_form(double t1, double t2, double w, int order = 128);

struct ConvolutionErrors {
  double vv = 0.0;
  double vtv = 0.0;
  double vvv = 0.0;

  double max_error() const;
};

/// Grid convolutions of v against their closed spectral forms.
ConvolutionErrors verify_convolutions(const TimeGrid& grid, double w, int order = 128);

}  // namespace wigstat
