#include "wigstat/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wigstat {
namespace {

std::vector<double> evaluate(const TestFunction& phi, const QuadratureRule& rule) {
  std::vector<double> v(rule.nodes().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi(rule.nodes()[i]);
  return v;
}

double factorial(int p) {
  double r = 1.0;
  for (int k = 2; k <= p; ++k) r *= k;
  return r;
}

}  // namespace

double divided_difference(const TestFunction& phi, double lambda1, double lambda2, double eps) {
  if (std::abs(lambda1 - lambda2) > eps) return (phi(lambda1) - phi(lambda2)) / (lambda1 - lambda2);
  return phi.derivative(0.5 * (lambda1 + lambda2));
}

double v_n_bilinear(const TestFunction& phi1, const TestFunction& phi2,
                    const QuadratureRule& cheb1) {
  if (cheb1.kind() != QuadratureKind::cheb1)
    throw std::invalid_argument("v_n_goe needs an arcsine-weight (cheb1) rule");
  const auto& x = cheb1.nodes();
  const auto& wt = cheb1.weights();
  const double w = cheb1.w();
  const double eps = divided_difference_threshold(w);
  const std::size_t k = x.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d1 = divided_difference(phi1, x[i], x[j], eps);
      const double d2 = &phi1 == &phi2 ? d1 : divided_difference(phi2, x[i], x[j], eps);
      row += wt[j] * d1 * d2 * (4.0 * w * w - x[i] * x[j]);
    }
    acc += wt[i] * row;
  }
  return acc / (2.0 * std::numbers::pi * std::numbers::pi);
}

double v_n_goe(const TestFunction& phi, const QuadratureRule& cheb1) {
  return v_n_bilinear(phi, phi, cheb1);
}

double v_jj_bilinear(const TestFunction& phi1, const TestFunction& phi2,
                     const QuadratureRule& cheb2) {
  if (cheb2.kind() != QuadratureKind::cheb2)
    throw std::invalid_argument("v_jj_goe needs a semicircle-weight (cheb2) rule");
  const auto f1 = evaluate(phi1, cheb2);
  const auto f2 = evaluate(phi2, cheb2);
  const auto& wt = cheb2.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < f1.size(); ++j) row += wt[j] * (f1[i] - f1[j]) * (f2[i] - f2[j]);
    acc += wt[i] * row;
  }
  return acc;
}

double v_jj_goe(const TestFunction& phi, const QuadratureRule& cheb2) {
  return v_jj_bilinear(phi, phi, cheb2);
}

double c_goe_covariance(const TestFunction& phi1, const TestFunction& phi2, double t_a,
                        double t_ac, const Quadratures& q) {
  double value = 0.0;
  if (t_a != 0.0) value += t_a * t_a * v_n_bilinear(phi1, phi2, q.cheb1);
  const double jj_weight = 0.5 * t_ac - t_a * t_a;
  if (jj_weight != 0.0) value += jj_weight * v_jj_bilinear(phi1, phi2, q.cheb2);
  return value;
}

double c_kappa3(const TestFunction& phi1, const TestFunction& phi2, double kappa3, double k1,
                double k2, const Quadratures& q) {
  if (kappa3 == 0.0 || (k1 == 0.0 && k2 == 0.0)) return 0.0;
  const double w = q.w();
  const double w2 = w * w;
  auto first = [&](const TestFunction& phi) {
    return q.cheb2.integrate([&](double l) { return l * phi(l); });
  };
  // int [K1 (l^2 - w^2) + K2 (2w^4/(4w^2 - l^2) - l^2)] phi rho
  auto second = [&](const TestFunction& phi) {
    const double regular =
        q.cheb2.integrate([&](double l) { return (k1 * (l * l - w2) - k2 * l * l) * phi(l); });
    const double singular = k2 == 0.0 ? 0.0 : k2 * w2 / std::numbers::pi * q.cheb1.integrate(phi);
    return regular + singular;
  };
  const double value = first(phi1) * second(phi2) + first(phi2) * second(phi1);
  return kappa3 / (w2 * w2 * w2) * value;
}

double c_kappa4(const TestFunction& phi1, const TestFunction& phi2, double kappa4, double k3,
                double t_a, const Quadratures& q) {
  if (kappa4 == 0.0) return 0.0;
  const double w = q.w();
  const double w2 = w * w;
  auto semicircle_part = [&](const TestFunction& phi) {
    return q.cheb2.integrate([&](double l) { return phi(l) * (w2 - l * l); });
  };
  auto arcsine_part = [&](const TestFunction& phi) {
    return q.cheb1.integrate([&](double l) { return phi(l) * (2.0 * w2 - l * l); });
  };
  double value = 0.0;
  if (k3 != 0.0) value += k3 * semicircle_part(phi1) * semicircle_part(phi2);
  if (t_a != 0.0)
    value += t_a * t_a / (2.0 * std::numbers::pi * std::numbers::pi) * arcsine_part(phi1) *
             arcsine_part(phi2);
  return kappa4 / (w2 * w2 * w2 * w2) * value;
}

double c_phi(const TestFunction& phi, const QuadratureRule& cheb2) {
  if (cheb2.kind() != QuadratureKind::cheb2)
    throw std::invalid_argument("c_phi needs a semicircle-weight (cheb2) rule");
  if (phi.parity() == Parity::even) return 0.0;
  const double w = cheb2.w();
  return cheb2.integrate([&](double l) { return phi(l) * l; }) / (w * w);
}

double w2_correction(const TestFunction& phi, double diag_multiplier, double k3, double t_a,
                     const Quadratures& q) {
  const double w2 = q.w() * q.w();
  const double semicircle = q.cheb2.integrate([&](double l) { return phi(l) * l; });
  const double arcsine =
      q.cheb1.integrate([&](double l) { return phi(l) * l; }) / (2.0 * std::numbers::pi);
  return (diag_multiplier - 2.0) / w2 *
         (k3 * semicircle * semicircle + t_a * t_a * arcsine * arcsine);
}

LimitLaw v_w(const TestFunction& phi, const EntryLaw& law, const ProbeFunctionals& f,
             const Quadratures& q, double diag_multiplier, int tail_extension) {
  if (std::abs(q.w() * q.w() - law.w2()) > 1e-12 * law.w2())
    throw std::invalid_argument("quadrature support radius does not match the entry law");
  const int max_order = law.order();
  if (static_cast<int>(f.a_p.size()) < max_order - 2)
    throw std::invalid_argument("probe functionals carry fewer A_p than the law's cumulant order");

  LimitLaw out;
  out.functionals = f;
  out.diag_multiplier = diag_multiplier;
  out.v_n = v_n_goe(phi, q.cheb1);
  out.v_jj = v_jj_goe(phi, q.cheb2);
  out.v_goe = f.t_a * f.t_a * out.v_n + (0.5 * f.t_ac - f.t_a * f.t_a) * out.v_jj;
  out.c_k3 = phi.parity() == Parity::even ? 0.0
                                          : c_kappa3(phi, phi, law.cumulant(3), f.k1, f.k2, q);
  out.c_k4 = phi.parity() == Parity::odd ? 0.0
                                         : c_kappa4(phi, phi, law.cumulant(4), f.k3, f.t_a, q);
  out.v_w = out.v_goe + out.c_k3 + out.c_k4;
  out.c_phi = c_phi(phi, q.cheb2);
  if (diag_multiplier != 2.0) out.w2_corr = w2_correction(phi, diag_multiplier, f.k3, f.t_a, q);

  for (int p = 3; p <= max_order; ++p)
    out.tail.push_back(out.c_phi == 0.0 ? 0.0
                                        : law.cumulant(p) * f.a(p) * std::pow(out.c_phi, p));
  // |A_p| <= max(2, w2)^{p/2} in general; with known atoms A_p = sum alpha^p exactly.
  const EntryLaw extended = law.with_order(max_order + tail_extension);
  const double bound_base = std::max(2.0, diag_multiplier);
  auto a_bound = [&](int p) {
    if (!f.atoms || f.diag_multiplier != diag_multiplier) return std::pow(bound_base, 0.5 * p);
    double s = 0.0;
    for (double alpha : *f.atoms) s += std::pow(std::abs(alpha), p);
    return s;
  };
  for (int p = max_order + 1; p <= max_order + tail_extension; ++p)
    out.tail_bound_coefficients.push_back(
        out.c_phi == 0.0 ? 0.0
                         : std::abs(extended.cumulant(p)) * a_bound(p) *
                               std::pow(std::abs(out.c_phi), p));
  return out;
}

LogCfValue log_cf(double x, const LimitLaw& limit, const EntryLaw& law, double tolerance) {
  using cplx = std::complex<double>;
  LogCfValue out;
  cplx value = -0.5 * x * x * limit.variance();
  const cplx ix(0.0, x);
  for (std::size_t i = 0; i < limit.tail.size(); ++i) {
    const int p = static_cast<int>(i) + 3;
    if (limit.tail[i] != 0.0) value += limit.tail[i] * std::pow(ix, p) / factorial(p);
  }
  out.value = value;

  const int first = limit.max_order() + 1;
  double bound = 0.0;
  double first_term = 0.0;
  double last_term = 0.0;
  for (std::size_t i = 0; i < limit.tail_bound_coefficients.size(); ++i) {
    const int p = first + static_cast<int>(i);
    const double term =
        limit.tail_bound_coefficients[i] * std::pow(std::abs(x), p) / factorial(p);
    if (i == 0) first_term = term;
    last_term = term;
    bound += term;
  }
  out.tail_bound = bound;
  out.divergent = last_term > 0.0 && last_term >= first_term;
  out.flagged = out.divergent || !(bound <= tolerance);

  const auto& atoms = limit.functionals.atoms;
  if (atoms && limit.diag_multiplier == limit.functionals.diag_multiplier) {
    // sum_{p>=3} kappa_p (i y)^p / p! = log E{e^{iyV}} + w^2 y^2 / 2
    double gaussian = -0.5 * x * x * limit.variance();
    cplx product = 1.0;
    for (double alpha : *atoms) {
      const double y = alpha * x * limit.c_phi;
      gaussian += 0.5 * law.w2() * y * y;
      product *= law.cf(y);
    }
    out.cf = std::exp(gaussian) * product;
    out.resummed = true;
  } else {
    out.cf = std::exp(out.value);
  }
  return out;
}

}  // namespace wigstat
