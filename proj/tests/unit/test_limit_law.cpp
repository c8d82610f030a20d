#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigstat/limit_law.hpp"

using namespace wigstat;

namespace {

double catalan(int m) {
  double c = 1.0;
  for (int k = 0; k < m; ++k) c = c * 2.0 * (2.0 * k + 1.0) / (k + 2.0);
  return c;
}

// int x^k rho_sc and int x^k / sqrt(4w^2 - x^2).
double sc_moment(int k, double w) { return k % 2 ? 0.0 : catalan(k / 2) * std::pow(w, k); }
double arcsine_moment(int k, double w) {
  if (k % 2) return 0.0;
  double binom = 1.0;
  for (int i = 1; i <= k / 2; ++i) binom = binom * (k / 2 + i) / i;
  return std::numbers::pi * std::pow(w, k) * binom;
}

const TestFunction lambda = TestFunction::polynomial({0.0, 1.0});
const TestFunction square = TestFunction::polynomial({0.0, 0.0, 1.0});
const TestFunction cube = TestFunction::polynomial({0.0, 0.0, 0.0, 1.0});
const TestFunction constant = TestFunction::polynomial({3.0});

// Exact Var Tr M^2 with diagonal sqrt(2) V / sqrt(n) and off-diagonal V / sqrt(n);
// each term is 2 V^2 / n and Var V^2 = kappa4 + 2 w^4.
double var_trace_square(double w2, double kappa4, int n) {
  const double var_square = kappa4 + 2.0 * w2 * w2;
  const double per_term = 4.0 * var_square / (double(n) * n);
  return n * per_term + 0.5 * n * (n - 1.0) * per_term;
}

}  // namespace

TEST_CASE("divided differences") {
  CHECK(divided_difference(square, 1.0, 3.0, 1e-6) == doctest::Approx(4.0));
  CHECK(divided_difference(square, 1.0, 1.0, 1e-6) == doctest::Approx(2.0));
  CHECK(divided_difference(lambda, -0.3, 1.7, 1e-6) == doctest::Approx(1.0));
  CHECK(divided_difference_threshold(1.0) == doctest::Approx(2e-6));
}

TEST_CASE("GOE variance forms") {
  for (double w : {1.0, 1.3}) {
    const auto q = Quadratures::make(w);
    CHECK(v_n_goe(lambda, q.cheb1) == doctest::Approx(2.0 * w * w).epsilon(1e-12));
    CHECK(v_n_goe(square, q.cheb1) == doctest::Approx(4.0 * std::pow(w, 4)).epsilon(1e-12));
    CHECK(v_n_goe(constant, q.cheb1) == 0.0);
    CHECK(v_jj_goe(lambda, q.cheb2) == doctest::Approx(2.0 * sc_moment(2, w)).epsilon(1e-12));
    CHECK(v_jj_goe(square, q.cheb2) ==
          doctest::Approx(2.0 * (sc_moment(4, w) - std::pow(sc_moment(2, w), 2))).epsilon(1e-12));
    CHECK(v_jj_goe(constant, q.cheb2) == 0.0);
  }
  CHECK_THROWS_AS(v_n_goe(lambda, QuadratureRule::cheb2(16, 1.0)), std::invalid_argument);
}

TEST_CASE("GOE covariance is a symmetric bilinear form") {
  const auto q = Quadratures::make(1.0);
  const auto f = TestFunction::sine(1.1), g = TestFunction::bump(0.8);
  for (auto [t_a, t_ac] : {std::pair{1.0, 2.0}, std::pair{0.0, 2.0}, std::pair{0.4, 1.5}}) {
    CHECK(c_goe_covariance(f, g, t_a, t_ac, q) ==
          doctest::Approx(c_goe_covariance(g, f, t_a, t_ac, q)).epsilon(1e-14));
    CHECK(c_goe_covariance(f, f, t_a, t_ac, q) >= 0.0);
    CHECK(c_goe_covariance(f, f, t_a, t_ac, q) ==
          doctest::Approx(t_a * t_a * v_n_goe(f, q.cheb1) +
                          (0.5 * t_ac - t_a * t_a) * v_jj_goe(f, q.cheb2)));
  }
  CHECK(std::abs(c_goe_covariance(lambda, square, 1.0, 2.0, q)) < 1e-13);
  CHECK(c_goe_covariance(f, g, 0.0, 2.0, q) == doctest::Approx(v_jj_bilinear(f, g, q.cheb2)));
}

TEST_CASE("kappa3 correction") {
  const auto q = Quadratures::make(1.0);
  CHECK(std::abs(c_kappa3(lambda, lambda, 0.7, 1.0, 0.5, q)) <= 1e-12);
  CHECK(c_kappa3(TestFunction::sine(1.0), square, 0.0, 1.0, 1.0, q) == 0.0);
  CHECK(c_kappa3(TestFunction::sine(1.0), square, 1.0, 0.0, 0.0, q) == 0.0);

  // Polynomial oracle: I1(x^k) = m_{k+1}, J(x^k) = K1 (m_{k+2} - w^2 m_k) + K2 (w^2/pi a_k - m_{k+2}).
  for (double w : {1.0, 1.3}) {
    const auto qw = Quadratures::make(w);
    const double k1 = 0.37, k2 = -0.8, kappa3 = 1.1;
    auto i1 = [&](int k) { return sc_moment(k + 1, w); };
    auto j = [&](int k) {
      return k1 * (sc_moment(k + 2, w) - w * w * sc_moment(k, w)) +
             k2 * (w * w / std::numbers::pi * arcsine_moment(k, w) - sc_moment(k + 2, w));
    };
    const auto quartic = TestFunction::polynomial({0.0, 0.0, 0.0, 0.0, 1.0});
    const double want = kappa3 / std::pow(w, 6) * (i1(1) * j(4) + i1(4) * j(1));
    CHECK(c_kappa3(lambda, quartic, kappa3, k1, k2, qw) == doctest::Approx(want).epsilon(1e-12));
    const double want3 = kappa3 / std::pow(w, 6) * (i1(2) * j(3) + i1(3) * j(2));
    CHECK(c_kappa3(square, cube, kappa3, k1, k2, qw) == doctest::Approx(want3).epsilon(1e-12));
  }
}

TEST_CASE("kappa4 correction") {
  const auto q = Quadratures::make(1.0);
  const double kappa4 = -1.2;
  CHECK(c_kappa4(square, square, kappa4, 0.0, 1.0, q) == doctest::Approx(2.0 * kappa4).epsilon(1e-12));
  CHECK(q.cheb1.integrate([](double l) { return l * l * (2.0 - l * l); }) ==
        doctest::Approx(-2.0 * std::numbers::pi));
  CHECK(std::abs(c_kappa4(lambda, cube, kappa4, 1.0, 1.0, q)) <= 1e-12);
  CHECK(c_kappa4(square, square, 0.0, 1.0, 1.0, q) == 0.0);
}

TEST_CASE("c_phi") {
  const auto q = Quadratures::make(1.0);
  CHECK(c_phi(lambda, q.cheb2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c_phi(square, q.cheb2) == 0.0);
  CHECK(c_phi(cube, q.cheb2) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(c_phi(lambda, Quadratures::make(2.0).cheb2) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("assembled limit laws") {
  const auto q = Quadratures::make(1.0);
  const auto identity = limit_functionals(Probe::identity());

  SUBCASE("GOE has no cumulant corrections") {
    const auto law = EntryLaw::make(SamplerKind::gaussian, 1.0);
    const auto l = v_w(TestFunction::sine(1.0), law, identity, q);
    CHECK(l.v_w == l.v_goe);
    CHECK(l.c_k3 == 0.0);
    CHECK(l.c_k4 == 0.0);
  }
  SUBCASE("uniform entries, Tr M^2") {
    const auto law = parse_law("uniform:w2=1");
    const auto l = v_w(square, law, identity, q);
    CHECK(l.v_w == doctest::Approx(1.6).epsilon(1e-9));
    // Combinatorial finite-n variance tends to the same value.
    CHECK(var_trace_square(1.0, law.cumulant(4), 1 << 20) == doctest::Approx(l.v_w).epsilon(1e-5));
  }
  SUBCASE("rademacher entries make Tr M^2 degenerate") {
    const auto l = v_w(square, parse_law("rademacher:w2=1"), identity, q);
    CHECK(std::abs(l.v_w) <= 1e-9);
  }
  SUBCASE("delocalized bilinear forms are universal") {
    const auto f = limit_functionals(Probe::delocalized_bilinear());
    for (const char* spec : {"two_point:p=0.25,w2=1", "uniform:w2=1", "rademacher:w2=1"}) {
      const auto l = v_w(square, parse_law(spec), f, q);
      CHECK(l.v_w == doctest::Approx(v_jj_goe(square, q.cheb2)).epsilon(1e-12));
    }
  }
  SUBCASE("decomposition identities and parity") {
    const auto law = parse_law("two_point:p=0.25,w2=1");
    for (const auto& probe : {Probe::identity(), Probe::matrix_element(1),
                              Probe::delocalized_bilinear(), Probe::spiked_bilinear(0.8)}) {
      const auto f = limit_functionals(probe);
      for (const auto& phi : {TestFunction::polynomial({0.0, 1.0, 0.5}), square,
                              TestFunction::sine(0.9), TestFunction::bump(0.7)}) {
        const auto l = v_w(phi, law, f, q);
        CHECK(l.v_goe == doctest::Approx(f.t_a * f.t_a * l.v_n + (0.5 * f.t_ac - f.t_a * f.t_a) * l.v_jj).epsilon(1e-12));
        CHECK(l.v_w == doctest::Approx(l.v_goe + l.c_k3 + l.c_k4).epsilon(1e-12));
        if (phi.parity() == Parity::even) {
          CHECK(l.c_phi == 0.0);
          CHECK(l.c_k3 == 0.0);
          for (double t : l.tail) CHECK(t == 0.0);
        }
        if (phi.parity() == Parity::odd) CHECK(l.c_k4 == 0.0);
        CHECK(l.tail.size() == 6);
      }
    }
  }
  SUBCASE("spiked probe activates the kappa3 term") {
    const auto f = limit_functionals(Probe::spiked_bilinear(0.8));
    const auto l = v_w(TestFunction::polynomial({0.0, 1.0, 0.5}), parse_law("two_point:p=0.25,w2=1"), f, q);
    CHECK(l.c_k3 > 0.1);
    CHECK(l.c_k3 == doctest::Approx(c_kappa3(TestFunction::polynomial({0.0, 1.0, 0.5}),
                                             TestFunction::polynomial({0.0, 1.0, 0.5}),
                                             2.0 / std::sqrt(3.0), f.k1, f.k2, q)));
  }
}

TEST_CASE("diagonal-variance correction reproduces exact variances") {
  const auto q = Quadratures::make(1.0);
  const auto law = parse_law("two_point:p=0.25,w2=1");
  for (double dm : {1.0, 3.0}) {
    // sqrt(n) M_jj = sqrt(dm) V and Tr M both have variance dm w^2 exactly.
    const auto elem = v_w(lambda, law, limit_functionals(Probe::matrix_element(1), 8, dm), q, dm);
    REQUIRE(elem.w2_corr);
    CHECK(elem.variance() == doctest::Approx(dm).epsilon(1e-12));
    CHECK(elem.tail[0] == doctest::Approx(law.cumulant(3) * std::pow(dm, 1.5)).epsilon(1e-12));
    const auto id = v_w(lambda, law, limit_functionals(Probe::identity(), 8, dm), q, dm);
    CHECK(id.variance() == doctest::Approx(dm).epsilon(1e-12));
  }
  CHECK_FALSE(v_w(lambda, law, limit_functionals(Probe::identity()), q).w2_corr);
}

TEST_CASE("log characteristic function") {
  const auto q = Quadratures::make(1.0);
  const auto law = parse_law("two_point:p=0.25,w2=1");

  const auto gaussian = v_w(TestFunction::sine(1.0), law, limit_functionals(Probe::identity()), q);
  for (double x : {0.5, 3.0}) {
    const auto r = log_cf(x, gaussian, law);
    CHECK(r.value.real() == doctest::Approx(-0.5 * x * x * gaussian.v_w));
    CHECK(r.value.imag() == 0.0);
    CHECK(r.tail_bound == 0.0);
    CHECK_FALSE(r.flagged);
  }

  const auto even = v_w(square, law, limit_functionals(Probe::matrix_element(1)), q);
  CHECK(log_cf(1.3, even, law).value.imag() == 0.0);

  const auto elem = v_w(lambda, law, limit_functionals(Probe::matrix_element(1)), q);
  const double k3 = law.cumulant(3);
  CHECK(elem.tail[0] == doctest::Approx(k3 * std::pow(2.0, 1.5)));
  CHECK(elem.tail[1] == doctest::Approx(law.cumulant(4) * 4.0));
  const double x = 0.1;
  const auto r = log_cf(x, elem, law);
  // Third-order term is kappa3 2^{3/2} (ix)^3 / 3!.
  CHECK(r.value.imag() == doctest::Approx(-k3 * std::pow(2.0, 1.5) * x * x * x / 6.0 +
                                          elem.tail[2] * std::pow(x, 5) / 120.0 -
                                          elem.tail[4] * std::pow(x, 7) / 5040.0).epsilon(1e-12));
  CHECK_FALSE(r.flagged);
  CHECK(log_cf(2.0, elem, law).flagged);

  // sqrt(n) M_jj = sqrt(2) V exactly, so the limit characteristic function is E e^{i x sqrt(2) V}.
  const auto [a, b] = law.atoms();
  for (double y : {0.3, 1.0, 2.0}) {
    const auto v = log_cf(y, elem, law);
    REQUIRE(v.resummed);
    const std::complex<double> want =
        0.25 * std::exp(std::complex<double>(0.0, std::sqrt(2.0) * a * y)) +
        0.75 * std::exp(std::complex<double>(0.0, std::sqrt(2.0) * b * y));
    CHECK(std::abs(v.cf - want) < 1e-12);
  }
  CHECK(std::abs(std::exp(log_cf(0.3, elem, law).value) - log_cf(0.3, elem, law).cf) <
        2.0 * log_cf(0.3, elem, law).tail_bound + 1e-15);
}

TEST_CASE("quadrature order doubling leaves limits unchanged") {
  const auto law = parse_law("two_point:p=0.25,w2=1");
  for (const auto& probe : {Probe::identity(), Probe::matrix_element(1), Probe::spiked_bilinear(0.8)}) {
    const auto f = limit_functionals(probe);
    for (const auto& phi : {TestFunction::polynomial({0.0, 1.0, 0.5, 0.2}), TestFunction::sine(1.5),
                            TestFunction::cosine(0.8), TestFunction::exponential(0.6),
                            TestFunction::bump(0.9)}) {
      const auto a = v_w(phi, law, f, Quadratures::make(1.0, 128));
      const auto b = v_w(phi, law, f, Quadratures::make(1.0, 256));
      auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1e-300, std::abs(y)) + 1e-15; };
      CAPTURE(phi.name());
      CHECK(close(a.v_w, b.v_w));
      CHECK(close(a.v_goe, b.v_goe));
      CHECK(close(a.c_k3, b.c_k3));
      CHECK(close(a.c_k4, b.c_k4));
      CHECK(close(a.c_phi, b.c_phi));
    }
  }
}
