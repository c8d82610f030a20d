#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigstat/errors.hpp"
#include "wigstat/quadrature.hpp"

using namespace wigstat;

namespace {

double catalan(int m) {
  double c = 1.0;
  for (int k = 0; k < m; ++k) c = c * 2.0 * (2.0 * k + 1.0) / (k + 2.0);
  return c;
}

// int x^k / sqrt(4w^2 - x^2) over [-2w, 2w] = pi (2w)^k binom(k, k/2) / 2^k.
double arcsine_moment(int k, double w) {
  if (k % 2) return 0.0;
  double binom = 1.0;
  for (int i = 1; i <= k / 2; ++i) binom = binom * (k / 2 + i) / i;
  return std::numbers::pi * std::pow(w, k) * binom;
}

}  // namespace

TEST_CASE("semicircle density and moments") {
  CHECK(rho_sc(0.0, 1.0) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(rho_sc(2.5, 1.0) == 0.0);
  for (int m = 0; m <= 8; ++m) {
    CHECK(semicircle_moment(2 * m, 1.3) == doctest::Approx(catalan(m) * std::pow(1.3, 2 * m)));
    if (2 * m + 1 <= 16) CHECK(semicircle_moment(2 * m + 1, 1.3) == 0.0);
  }
  CHECK_THROWS_AS(semicircle_moment(17, 1.0), std::invalid_argument);
}

TEST_CASE("cheb2 integrates polynomials against rho_sc exactly") {
  for (double w : {1.0, 0.7}) {
    const auto rule = QuadratureRule::cheb2(32, w);
    double total = 0.0;
    for (double x : rule.weights()) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 0; k <= 16; ++k) {
      const double got = rule.integrate([k](double x) { return std::pow(x, k); });
      CHECK(got == doctest::Approx(catalan(k / 2) * std::pow(w, k) * (k % 2 == 0)).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("cheb1 integrates polynomials against the arcsine weight exactly") {
  const double w = 1.2;
  const auto rule = QuadratureRule::cheb1(32, w);
  for (int k = 0; k <= 16; ++k) {
    const double got = rule.integrate([k](double x) { return std::pow(x, k); });
    CHECK(got == doctest::Approx(arcsine_moment(k, w)).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("nodes are symmetric and inside the support") {
  for (int order : {7, 8}) {
    const auto rule = QuadratureRule::cheb1(order, 1.0);
    const auto& x = rule.nodes();
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::abs(x[i]) < 2.0);
      CHECK(x[i] == -x[x.size() - 1 - i]);
    }
  }
}

TEST_CASE("odd integrands vanish exactly by pairing") {
  const auto rule = QuadratureRule::cheb2(128, 1.0);
  CHECK(rule.integrate([](double x) { return std::sin(3.0 * x) * std::exp(x * x); }) == 0.0);
}

TEST_CASE("non-finite integrands are reported") {
  const auto rule = QuadratureRule::cheb1(16, 1.0);
  CHECK_THROWS_AS(rule.integrate([&rule](double x) { return 1.0 / (x - rule.nodes()[3]); }),
                  NumericalError);
}
