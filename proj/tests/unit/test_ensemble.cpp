#include <doctest.h>

#include <cmath>

#include "wigstat/ensemble.hpp"

using namespace wigstat;

TEST_CASE("packed upper triangle is row-major over j <= k") {
  std::vector<double> upper(SymmetricMatrixSample::packed_size(3));
  for (std::size_t i = 0; i < upper.size(); ++i) upper[i] = static_cast<double>(i);
  const SymmetricMatrixSample m(3, upper);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 2) == 2.0);
  CHECK(m(1, 1) == 3.0);
  CHECK(m(2, 1) == 4.0);
  CHECK(m(2, 2) == 5.0);
  const Eigen::MatrixXd d = m.dense();
  CHECK((d - d.transpose()).norm() == 0.0);
  CHECK(d(2, 0) == 2.0);
}

TEST_CASE("same generator state gives the same matrix") {
  const auto e = Ensemble::wigner(parse_law("uniform:w2=1"));
  Rng a(99), b(99);
  CHECK(sample_matrix(e, 20, a).upper() == sample_matrix(e, 20, b).upper());
}

TEST_CASE("entry variances are w^2/n off the diagonal and 2 w^2/n on it") {
  const int n = 8;
  const double w2 = 1.5;
  const auto e = Ensemble::wigner(EntryLaw::make(SamplerKind::two_point, w2, 0.25));
  Rng rng(3);
  const int reps = 20000;
  double off = 0.0, diag = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto m = sample_matrix(e, n, rng);
    off += m(0, 1) * m(0, 1);
    diag += m(2, 2) * m(2, 2);
  }
  off /= reps;
  diag /= reps;
  CHECK(off * n == doctest::Approx(w2).epsilon(0.05));
  CHECK(diag * n == doctest::Approx(2.0 * w2).epsilon(0.05));
}

TEST_CASE("diagonal multiplier scales only the diagonal") {
  const auto law = parse_law("rademacher:w2=1");
  Rng rng(5);
  const auto m = w2_variant_matrix(law, 16, 1.0, rng);
  for (int j = 0; j < 16; ++j) {
    CHECK(std::abs(m(j, j)) == doctest::Approx(1.0 / 4.0));
    if (j + 1 < 16) CHECK(std::abs(m(j, j + 1)) == doctest::Approx(1.0 / 4.0));
  }
  const auto standard = Ensemble::wigner(law);
  Rng rng2(5);
  const auto s = sample_matrix(standard, 16, rng2);
  CHECK(std::abs(s(3, 3)) == doctest::Approx(std::sqrt(2.0) / 4.0));
}

TEST_CASE("GOE ensembles use gaussian entries") {
  const auto e = Ensemble::goe(2.0);
  CHECK(e.kind == Ensemble::Kind::goe);
  CHECK(e.law.kind() == SamplerKind::gaussian);
  CHECK(e.w2() == 2.0);
  Rng rng(1);
  CHECK_THROWS_AS(sample_matrix(e, 1, rng), std::invalid_argument);
}
