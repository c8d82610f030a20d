#include "wigstat/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wigstat/quadrature.hpp"

namespace wigstat {
namespace {

int grid_intervals(double horizon, double step) {
  if (!(step > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("time grid needs positive horizon and step");
  if (step > kMaxGridStep * (1.0 + 1e-12))
    throw std::invalid_argument("time grid step exceeds 0.05");
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("time grid horizon is not a multiple of the step");
  return static_cast<int>(rounded);
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("grid functions live on different grids");
}

// Spectral evaluator for integrals of e^{it lambda} against rho_sc.
class SemicircleFourier {
 public:
  SemicircleFourier(double w, int order) : rule_(QuadratureRule::cheb2(order, w)) {}

  double v(double t) const {
    const auto& x = rule_.nodes();
    const auto& wt = rule_.weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += wt[i] * std::cos(t * x[i]);
    return acc;
  }

 private:
  QuadratureRule rule_;
};

// Divided difference of e^{it lambda}, (e^{it l1} - e^{it l2}) / (l1 - l2).
cplx exp_divided_difference(double t, double l1, double l2, cplx e1, cplx e2, double eps) {
  if (std::abs(l1 - l2) > eps) return (e1 - e2) / (l1 - l2);
  const double mid = 0.5 * (l1 + l2);
  return cplx(0.0, t) * cplx(std::cos(t * mid), std::sin(t * mid));
}

// F3(., t2) for fixed t2: the t2 factor and the kernel are folded into one
// weight matrix so each t1 costs one pass over the node pairs.
class F3ClosedForm {
 public:
  F3ClosedForm(double t2, double w, int order) : rule_(QuadratureRule::cheb1(order, w)), w_(w) {
    const auto& x = rule_.nodes();
    const auto& wt = rule_.weights();
    const std::size_t k = x.size();
    const double eps = 1e-6 * 2.0 * w;
    const auto e = exponentials(t2);
    weight_.resize(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        weight_[i * k + j] = wt[i] * wt[j] * (4.0 * w * w - x[i] * x[j]) *
                             exp_divided_difference(t2, x[i], x[j], e[i], e[j], eps);
  }

  double operator()(double t1) const {
    const auto& x = rule_.nodes();
    const std::size_t k = x.size();
    const double eps = 1e-6 * 2.0 * w_;
    const auto e = exponentials(t1);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      cplx row = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        row += weight_[i * k + j] * exp_divided_difference(t1, x[i], x[j], e[i], e[j], eps);
      acc += row;
    }
    // The imaginary part cancels under lambda -> -lambda.
    return acc.real() / (2.0 * std::numbers::pi * std::numbers::pi);
  }

 private:
  std::vector<cplx> exponentials(double t) const {
    std::vector<cplx> e;
    e.reserve(rule_.nodes().size());
    for (double l : rule_.nodes()) e.emplace_back(std::cos(t * l), std::sin(t * l));
    return e;
  }

  QuadratureRule rule_;
  double w_;
  std::vector<cplx> weight_;
};

}  // namespace

TimeGrid::TimeGrid(double horizon, double step)
    : horizon_(horizon), step_(step), intervals_(grid_intervals(horizon, step)) {}

TimeGrid TimeGrid::extended(double extra) const {
  if (extra == 0.0) return *this;
  return TimeGrid(horizon_ + extra, step_);
}

std::size_t TimeGrid::index_of(double t) const {
  const double ratio = t / step_;
  const double rounded = std::round(ratio);
  if (rounded < 0.0 || rounded > intervals_ || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("t = " + std::to_string(t) + " is not a node of the time grid");
  return static_cast<std::size_t>(rounded);
}

GridFunction::GridFunction(TimeGrid grid) : grid_(grid), values_(grid.size()) {}

GridFunction::GridFunction(TimeGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("grid function length does not match its grid");
}

GridFunction GridFunction::sample(const TimeGrid& grid, const std::function<cplx(double)>& f) {
  GridFunction out(grid);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(grid.t(k));
  return out;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  double sup = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sup = std::max(sup, std::abs(f[k] - g[k]));
  return sup;
}

double v_of_t(double t, double w, int order) { return SemicircleFourier(w, order).v(t); }

GridFunction v_on_grid(const TimeGrid& grid, double w, int order) {
  const SemicircleFourier fourier(w, order);
  return GridFunction::sample(grid, [&](double t) { return cplx(fourier.v(t)); });
}

cplx stieltjes_v(cplx z, double w) {
  if (z.imag() == 0.0) throw std::invalid_argument("Stieltjes transform needs Im z != 0");
  const double w2 = w * w;
  const cplx s = std::sqrt(z * z - 4.0 * w2);
  const cplx plus = (-z + s) / (2.0 * w2);
  const cplx minus = (-z - s) / (2.0 * w2);
  cplx root = plus.imag() * z.imag() > 0.0 ? plus : minus;
  // One Newton step polishes the root against cancellation in -z + s.
  const cplx residual = w2 * root * root + z * root + 1.0;
  const cplx slope = 2.0 * w2 * root + z;
  if (std::abs(slope) > 0.0) root -= residual / slope;
  return root;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const double h = f.grid().step();
  GridFunction out(f.grid());
  for (std::size_t k = 1; k < f.size(); ++k) {
    cplx acc = 0.5 * (f[k] * g[0] + f[0] * g[k]);
    for (std::size_t j = 1; j < k; ++j) acc += f[k - j] * g[j];
    out[k] = h * acc;
  }
  return out;
}

GridFunction integrate_cumulative(const GridFunction& f) {
  const double h = f.grid().step();
  GridFunction out(f.grid());
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
  return out;
}

GridFunction solve_volterra(const GridFunction& q, const GridFunction& r, double coefficient) {
  require_same_grid(q, r);
  const double h = q.grid().step();
  GridFunction p(q.grid());
  p[0] = r[0];
  // inner[k] = (Q * P)(t_k); outer = int_0^t inner.
  cplx inner_prev = 0.0;
  cplx outer_prev = 0.0;
  const double self = coefficient * 0.25 * h * h;
  for (std::size_t k = 1; k < p.size(); ++k) {
    cplx known = 0.5 * q[k] * p[0];
    for (std::size_t j = 1; j < k; ++j) known += q[k - j] * p[j];
    known *= h;
    // inner_k = known + (h/2) Q_0 P_k; outer_k = outer_prev + (h/2)(inner_prev + inner_k).
    const cplx rhs = r[k] - coefficient * (outer_prev + 0.5 * h * (inner_prev + known));
    p[k] = rhs / (1.0 + self * q[0]);
    const cplx inner = known + 0.5 * h * q[0] * p[k];
    outer_prev += 0.5 * h * (inner_prev + inner);
    inner_prev = inner;
  }
  return p;
}

FourierTransformValue generalized_fourier(const GridFunction& f, cplx z) {
  if (!(z.imag() < 0.0)) throw std::invalid_argument("generalized Fourier transform needs Im z < 0");
  const auto& grid = f.grid();
  const double h = grid.step();
  cplx acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double weight = (k == 0 || k + 1 == f.size()) ? 0.5 * h : h;
    acc += weight * std::exp(cplx(0.0, -1.0) * z * grid.t(k)) * f[k];
  }
  FourierTransformValue out;
  out.value = acc / cplx(0.0, 1.0);
  out.tail_bound = std::exp(z.imag() * grid.horizon()) / std::abs(z.imag());
  return out;
}

double LemmaErrors::max_error() const {
  double m = f1;
  for (double e : f2) m = std::max(m, e);
  for (double e : f3) m = std::max(m, e);
  return m;
}

double ConvolutionErrors::max_error() const { return std::max({vv, vtv, vvv}); }

double f3_closed_form(double t1, double t2, double w, int order) {
  return F3ClosedForm(t2, w, order)(t1);
}

LemmaErrors verify_lemma1(const TimeGrid& grid, double w, const std::vector<double>& t2_values,
                          int order) {
  LemmaErrors out;
  out.t2_values = t2_values;
  const double w2 = w * w;
  double t2_max = 0.0;
  for (double t2 : t2_values) {
    if (t2 < 0.0) throw std::invalid_argument("t2 values must be nonnegative");
    t2_max = std::max(t2_max, t2);
  }
  // v on [0, T + max t2] so that v(t3 + t4) and v(t1 + t2) are grid lookups.
  const auto extra = static_cast<std::size_t>(std::ceil(t2_max / grid.step() - 1e-9));
  const TimeGrid wide(grid.horizon() + static_cast<double>(extra) * grid.step(), grid.step());
  const GridFunction v_wide = v_on_grid(wide, w, order);
  GridFunction v(grid);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = v_wide[k];

  const GridFunction one = GridFunction::sample(grid, [](double) { return cplx(1.0); });
  out.f1 = sup_distance(solve_volterra(v, one, w2), v);

  const double h = grid.step();
  for (double t2 : t2_values) {
    const std::size_t m = static_cast<std::size_t>(std::round(t2 / h));
    if (std::abs(static_cast<double>(m) * h - t2) > 1e-9 * std::max(1.0, t2))
      throw std::invalid_argument("t2 = " + std::to_string(t2) + " is not a multiple of the grid step");

    // F2: R(t1) = -w^2 int_0^t1 S(t3) dt3, S(t3) = int_0^t2 v(t2 - t4) v(t3 + t4) dt4.
    GridFunction s(grid);
    for (std::size_t k = 0; k < s.size(); ++k) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j <= m; ++j) {
        const double weight = (j == 0 || j == m) ? 0.5 * h : h;
        acc += weight * v_wide[m - j] * v_wide[k + j];
      }
      s[k] = m == 0 ? cplx(0.0) : acc;
    }
    GridFunction r2 = integrate_cumulative(s);
    for (std::size_t k = 0; k < r2.size(); ++k) r2[k] *= -w2;
    const GridFunction f2 = solve_volterra(v, r2, w2);
    GridFunction f2_exact(grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
      f2_exact[k] = v_wide[k + m] - v_wide[k] * v_wide[m];
    out.f2.push_back(sup_distance(f2, f2_exact));

    // F3: R(t1) = -2 w^2 t2 int_0^t1 v(t2 + t3) dt3 with kernel weight 2 w^2.
    GridFunction shifted(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) shifted[k] = v_wide[k + m];
    GridFunction r3 = integrate_cumulative(shifted);
    for (std::size_t k = 0; k < r3.size(); ++k) r3[k] *= -2.0 * w2 * t2;
    const GridFunction f3 = solve_volterra(v, r3, 2.0 * w2);
    if (m == 0) {
      double sup = 0.0;
      for (std::size_t k = 0; k < f3.size(); ++k) sup = std::max(sup, std::abs(f3[k]));
      out.f3_at_zero = sup;
    }
    const F3ClosedForm closed(t2, w, order);
    GridFunction f3_exact(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) f3_exact[k] = closed(grid.t(k));
    out.f3.push_back(sup_distance(f3, f3_exact));
  }
  return out;
}

ConvolutionErrors verify_convolutions(const TimeGrid& grid, double w, int order) {
  const double w2 = w * w;
  const QuadratureRule semicircle = QuadratureRule::cheb2(order, w);
  const QuadratureRule arcsine = QuadratureRule::cheb1(order, w);
  auto spectral = [](const QuadratureRule& rule, double t, const std::function<double(double)>& g) {
    cplx acc = 0.0;
    const auto& x = rule.nodes();
    const auto& wt = rule.weights();
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += wt[i] * g(x[i]) * cplx(std::cos(t * x[i]), std::sin(t * x[i]));
    return acc;
  };

  const GridFunction v = v_on_grid(grid, w, order);
  GridFunction tv(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) tv[k] = grid.t(k) * v[k];

  ConvolutionErrors out;
  const GridFunction vv = convolve(v, v);
  out.vv = sup_distance(vv, GridFunction::sample(grid, [&](double t) {
    return cplx(0.0, -1.0 / w2) * spectral(semicircle, t, [](double mu) { return mu; });
  }));
  out.vtv = sup_distance(convolve(v, tv), GridFunction::sample(grid, [&](double t) {
    const cplx regular = spectral(semicircle, t, [](double) { return 1.0; });
    const cplx singular = spectral(arcsine, t, [](double) { return 1.0; });
    return regular / w2 - singular / (std::numbers::pi * w2);
  }));
  out.vvv = sup_distance(convolve(vv, v), GridFunction::sample(grid, [&](double t) {
    return spectral(semicircle, t, [&](double mu) { return w2 - mu * mu; }) / (w2 * w2);
  }));
  return out;
}

}  // namespace wigstat
