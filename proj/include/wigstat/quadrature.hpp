#pragma once

#include <functional>
#include <vector>

namespace wigstat {

/// Density of the semicircle law on [-2w, 2w].
double rho_sc(double lambda, double w);

/// k-th moment of rho_sc: Catalan(k/2) w^k for even k <= 16, zero for odd k.
double semicircle_moment(int k, double w);

enum class QuadratureKind {
  cheb1,  // weight 1/sqrt(4w^2 - lambda^2); weights sum to pi
  cheb2,  // weight rho_sc; weights sum to 1
};

/// Gauss-Chebyshev rule on [-2w, 2w] via lambda = 2w cos(theta). Exact for
/// polynomials of degree <= 2K - 1.
class QuadratureRule {
 public:
  static QuadratureRule cheb1(int order, double w);
  static QuadratureRule cheb2(int order, double w);

  QuadratureKind kind() const { return kind_; }
  int order() const { return static_cast<int>(nodes_.size()); }
  double w() const { return w_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Throws NumericalError naming the node if f is not finite there.
  double integrate(const std::function<double(double)>& f) const;

 private:
  QuadratureRule(QuadratureKind kind, double w) : kind_(kind), w_(w) {}

  QuadratureKind kind_;
  double w_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr int kDefaultQuadratureOrder = 128;

/// The pair of rules every limit formula needs, sharing w and K.
struct Quadratures {
  QuadratureRule cheb1;
  QuadratureRule cheb2;

  static Quadratures make(double w, int order = kDefaultQuadratureOrder) {
    return {QuadratureRule::cheb1(order, w), QuadratureRule::cheb2(order, w)};
  }
  double w() const { return cheb1.w(); }
};

}  // namespace wigstat
