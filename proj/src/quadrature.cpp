#include "wigstat/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wigstat/entry_law.hpp"
#include "wigstat/errors.hpp"

namespace wigstat {

double rho_sc(double lambda, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("rho_sc: w must be positive");
  const double r2 = 4.0 * w * w - lambda * lambda;
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2.0 * std::numbers::pi * w * w);
}

double semicircle_moment(int k, double w) {
  if (k < 0 || k > 16) throw std::invalid_argument("semicircle_moment: k must lie in [0, 16]");
  if (k % 2 != 0) return 0.0;
  const int m = k / 2;
  // Catalan(m) = binom(2m, m) / (m + 1)
  double catalan = 1.0;
  for (int i = 0; i < m; ++i) catalan = catalan * 2.0 * (2 * i + 1) / (i + 2);
  return catalan * std::pow(w, k);
}

QuadratureRule QuadratureRule::cheb1(int order, double w) {
  if (order < 1 || !(w > 0.0)) throw std::invalid_argument("cheb1: need K >= 1 and w > 0");
  QuadratureRule rule(QuadratureKind::cheb1, w);
  rule.nodes_.resize(static_cast<std::size_t>(order));
  rule.weights_.assign(static_cast<std::size_t>(order), std::numbers::pi / order);
  for (int k = 0; k < order; ++k) {
    const double theta = (2.0 * k + 1.0) * std::numbers::pi / (2.0 * order);
    rule.nodes_[static_cast<std::size_t>(k)] = 2.0 * w * std::cos(theta);
  }
  // Exact antisymmetry of the node set.
  for (int k = 0; k < order / 2; ++k)
    rule.nodes_[static_cast<std::size_t>(order - 1 - k)] = -rule.nodes_[static_cast<std::size_t>(k)];
  if (order % 2 == 1) rule.nodes_[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

QuadratureRule QuadratureRule::cheb2(int order, double w) {
  if (order < 1 || !(w > 0.0)) throw std::invalid_argument("cheb2: need K >= 1 and w > 0");
  QuadratureRule rule(QuadratureKind::cheb2, w);
  rule.nodes_.resize(static_cast<std::size_t>(order));
  rule.weights_.resize(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double theta = (k + 1.0) * std::numbers::pi / (order + 1.0);
    const double s = std::sin(theta);
    rule.nodes_[static_cast<std::size_t>(k)] = 2.0 * w * std::cos(theta);
    rule.weights_[static_cast<std::size_t>(k)] = 2.0 * s * s / (order + 1.0);
  }
  for (int k = 0; k < order / 2; ++k) {
    const auto lo = static_cast<std::size_t>(k);
    const auto hi = static_cast<std::size_t>(order - 1 - k);
    rule.nodes_[hi] = -rule.nodes_[lo];
    rule.weights_[hi] = rule.weights_[lo];
  }
  if (order % 2 == 1) rule.nodes_[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  // Symmetric pairing so that odd integrands cancel to rounding level.
  const std::size_t k = nodes_.size();
  double acc = 0.0;
  auto eval = [&](std::size_t i) {
    const double v = f(nodes_[i]);
    if (!std::isfinite(v))
      throw NumericalError("integrand is not finite at node " + std::to_string(i) +
                           " (lambda = " + format_number(nodes_[i]) + ")");
    return v;
  };
  for (std::size_t i = 0; i < k / 2; ++i) acc += weights_[i] * (eval(i) + eval(k - 1 - i));
  if (k % 2 == 1) acc += weights_[k / 2] * eval(k / 2);
  return acc;
}

}  // namespace wigstat
