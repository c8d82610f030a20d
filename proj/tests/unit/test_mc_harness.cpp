#include <doctest.h>

#include <cmath>
#include <random>

#include "wigstat/errors.hpp"
#include "wigstat/mc_harness.hpp"

using namespace wigstat;

namespace {

const TestFunction lambda = TestFunction::polynomial({0.0, 1.0});

McConfig base_config() {
  McConfig c;
  c.ensemble = Ensemble::goe(1.0);
  c.n = 32;
  c.reps = 2000;
  c.seed = 5;
  c.x_grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  return c;
}

LimitLabel label_of(const McSummary& s) { return {s.law, s.probe, s.phi, s.diag_multiplier}; }

}  // namespace

TEST_CASE("k-statistics on small samples") {
  const std::vector<double> triple{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(k_statistics(triple), std::invalid_argument);
  const std::vector<double> doubled{1.0, 2.0, 3.0, 1.0, 2.0, 3.0};
  const auto k = k_statistics(doubled);
  CHECK(k.mean == doctest::Approx(2.0));
  CHECK(k.k2 == doctest::Approx(0.8));
  CHECK(std::abs(k.k3) < 1e-14);
  // Brute force unbiased k4 for a symmetric sample: n^2 ((n+1) m4 - 3 (n-1) m2^2) / ((n-1)(n-2)(n-3)).
  const double m2 = 4.0 / 6.0, m4 = 4.0 / 6.0, n = 6.0;
  CHECK(k.k4 == doctest::Approx(n * n * ((n + 1) * m4 - 3 * (n - 1) * m2 * m2) / ((n - 1) * (n - 2) * (n - 3))));
}

TEST_CASE("k-statistics on synthetic draws") {
  constexpr int kDraws = 1'000'000;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> g(kDraws);
  for (double& x : g) x = normal(rng);
  const auto kg = k_statistics(g);
  CHECK(std::abs(kg.k2 - 1.0) <= 4.0 * kg.se_k2);
  CHECK(std::abs(kg.k3) <= 4.0 * kg.se_k3);
  CHECK(std::abs(kg.k4) <= 4.0 * kg.se_k4);
  CHECK(kg.se_k4 == doctest::Approx(std::sqrt(24.0 / kDraws)).epsilon(0.05));

  const auto law = parse_law("two_point:p=0.25,w2=1");
  std::vector<double> t(kDraws);
  law.fill(t, rng);
  const auto kt = k_statistics(t);
  CHECK(std::abs(kt.k3 - 2.0 / std::sqrt(3.0)) <= 4.0 * kt.se_k3);
  CHECK(std::abs(kt.k4 - law.cumulant(4)) <= 4.0 * kt.se_k4);
}

TEST_CASE("empirical characteristic function") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 1.3);
  std::vector<double> s(20000);
  for (double& x : s) x = normal(rng);
  const std::vector<double> grid{-2.0, -1.0, 0.0, 1.0, 2.0};
  const auto z = ecf(s, grid);
  CHECK(z[2] == std::complex<double>(1.0, 0.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(z[i]) <= 1.0 + 1e-15);
    CHECK(std::abs(z[i] - std::conj(z[grid.size() - 1 - i])) <= 1e-15);
    CHECK(std::abs(z[i] - std::exp(-0.5 * grid[i] * grid[i] * 1.69)) <= 4.0 / std::sqrt(20000.0));
  }
}

TEST_CASE("config validation") {
  auto c = base_config();
  c.reps = 99;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base_config();
  c.n = 15;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base_config();
  c.n_sweep = {8, 32};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base_config();
  c.threads = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base_config();
  c.probe = Probe::fixed_matrix(Eigen::MatrixXd::Identity(20, 20), "file:x");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_NOTHROW(base_config().validate());
}

TEST_CASE("runs are deterministic and independent of the worker count") {
  const auto law = parse_law("uniform:w2=1");
  const auto ens = Ensemble::wigner(law);
  for (auto evaluation : {Evaluation::automatic, Evaluation::spectral}) {
    const auto a = sample_statistic(ens, Probe::spiked_bilinear(0.7), TestFunction::sine(1.0), 24, 150, 17, 1, evaluation);
    const auto b = sample_statistic(ens, Probe::spiked_bilinear(0.7), TestFunction::sine(1.0), 24, 150, 17, 3, evaluation);
    CHECK(a == b);
  }
  auto c = base_config();
  c.reps = 300;
  const auto r1 = run(c);
  c.threads = 4;
  const auto r2 = run(c);
  CHECK(r1.samples == r2.samples);
  CHECK(r1.summary.stats.k2 == r2.summary.stats.k2);
  CHECK(r1.summary.ecf == r2.summary.ecf);
  c.seed = 6;
  CHECK(run(c).samples != r1.samples);

  double total = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < r1.centered.size(); ++i) {
    total += r1.centered[i];
    scale = std::max(scale, std::abs(r1.samples[i]));
  }
  CHECK(std::abs(total) <= 1e-9 * c.reps * std::max(1.0, scale));
}

TEST_CASE("exact finite-n identities") {
  SUBCASE("GOE trace variance") {
    const auto r = run(base_config());
    CHECK(std::abs(r.summary.stats.k2 - 2.0) <= 4.0 * r.summary.stats.se_k2);
  }
  SUBCASE("GOE diagonal element is Gaussian") {
    auto c = base_config();
    c.probe = Probe::matrix_element(1);
    const auto r = run(c);
    CHECK(std::abs(r.summary.stats.k3) <= 4.0 * r.summary.stats.se_k3);
    CHECK(std::abs(r.summary.stats.k2 - 2.0) <= 4.0 * r.summary.stats.se_k2);
  }
  SUBCASE("Rademacher Tr M^2 is deterministic") {
    auto c = base_config();
    c.ensemble = Ensemble::wigner(parse_law("rademacher:w2=1"));
    c.phi = TestFunction::polynomial({0.0, 0.0, 1.0});
    c.reps = 200;
    const auto r = run(c);
    CHECK(r.summary.stats.k2 == 0.0);
  }
}

TEST_CASE("comparison against limits") {
  const auto q = Quadratures::make(1.0);
  SUBCASE("matrix element with skewed entries") {
    const auto law = parse_law("two_point:p=0.25,w2=1");
    auto c = base_config();
    c.ensemble = Ensemble::wigner(law);
    c.probe = Probe::matrix_element(1);
    c.reps = 5000;
    const auto r = run(c);
    const auto limit = v_w(lambda, law, limit_functionals(c.probe), q);
    const auto report = compare(r.summary, limit, law, label_of(r.summary));
    CHECK(report.rows[1].theory == doctest::Approx(law.cumulant(3) * std::pow(2.0, 1.5)));
    CHECK(report.rows[1].source == "tail[3]");
    CHECK(report.ecf_resummed);
    CHECK(report.passed());
  }
  SUBCASE("even test function compares k3 against zero") {
    const auto law = parse_law("two_point:p=0.25,w2=1");
    auto c = base_config();
    c.ensemble = Ensemble::wigner(law);
    c.phi = TestFunction::cosine(1.0);
    c.reps = 200;
    const auto r = run(c);
    const auto limit = v_w(c.phi, law, limit_functionals(c.probe), q);
    const auto report = compare(r.summary, limit, law, label_of(r.summary));
    CHECK(report.rows[1].theory == 0.0);
  }
  SUBCASE("metadata mismatch") {
    const auto law = EntryLaw::make(SamplerKind::gaussian, 1.0);
    auto c = base_config();
    c.reps = 200;
    const auto r = run(c);
    const auto limit = v_w(lambda, law, limit_functionals(c.probe), q);
    auto label = label_of(r.summary);
    label.phi = "cos:1";
    CHECK_THROWS_AS(compare(r.summary, limit, law, label), ConfigError);
    label = label_of(r.summary);
    label.probe = "elem:j=1";
    CHECK_THROWS_AS(compare(r.summary, limit, law, label), ConfigError);
    label = label_of(r.summary);
    label.diag_multiplier = 1.0;
    CHECK_THROWS_AS(compare(r.summary, limit, law, label), ConfigError);
  }
}

TEST_CASE("n-sweep") {
  auto c = base_config();
  c.phi = TestFunction::polynomial({0.0, 0.0, 0.0, 1.0});
  c.reps = 400;
  c.n = 64;
  c.n_sweep = {16, 32, 64};
  const auto r = run(c);
  REQUIRE(r.summary.sweep.size() == 3);
  CHECK(r.summary.sweep[2].stats.k2 == r.summary.stats.k2);
  const auto law = EntryLaw::make(SamplerKind::gaussian, 1.0);
  const auto limit = v_w(c.phi, law, limit_functionals(c.probe), Quadratures::make(1.0));
  const auto report = compare(r.summary, limit, law, label_of(r.summary));
  CHECK(report.rows.size() == 6);
  CHECK_FALSE(report.rows[3].gated);
  CHECK(report.sweep_monotone);

  std::vector<SweepPoint> synthetic(2);
  synthetic[0].stats.k2 = 1.5;
  synthetic[1].stats.k2 = 3.0;
  synthetic[0].stats.se_k2 = synthetic[1].stats.se_k2 = 0.01;
  CHECK_FALSE(sweep_non_increasing(synthetic, 1.0));
  CHECK(sweep_non_increasing(synthetic, 2.5));
}
