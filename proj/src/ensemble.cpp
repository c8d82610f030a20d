#include "wigstat/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace wigstat {

SymmetricMatrixSample::SymmetricMatrixSample(int n, std::vector<double> upper)
    : n_(n), upper_(std::move(upper)) {
  if (n < 1 || upper_.size() != packed_size(n))
    throw std::invalid_argument("packed upper triangle has the wrong length");
}

Eigen::MatrixXd SymmetricMatrixSample::dense() const {
  Eigen::MatrixXd m(n_, n_);
  std::size_t idx = 0;
  for (int j = 0; j < n_; ++j) {
    for (int k = j; k < n_; ++k) {
      m(j, k) = upper_[idx];
      m(k, j) = upper_[idx];
      ++idx;
    }
  }
  return m;
}

Ensemble Ensemble::goe(double w2, int order) {
  return Ensemble{Kind::goe, EntryLaw::make(SamplerKind::gaussian, w2, 0.5, order), 2.0};
}

Ensemble Ensemble::wigner(EntryLaw law, double diag_multiplier) {
  if (!(diag_multiplier > 0.0))
    throw std::invalid_argument("diagonal variance multiplier must be positive");
  return Ensemble{Kind::wigner, std::move(law), diag_multiplier};
}

SymmetricMatrixSample w2_variant_matrix(const EntryLaw& law, int n, double diag_multiplier,
                                        Rng& rng) {
  if (n < 2) throw std::invalid_argument("matrix dimension must be at least 2");
  if (!(diag_multiplier > 0.0))
    throw std::invalid_argument("diagonal variance multiplier must be positive");
  std::vector<double> upper(SymmetricMatrixSample::packed_size(n));
  law.fill(upper, rng);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag_scale = std::sqrt(diag_multiplier) * scale;
  std::size_t idx = 0;
  for (int j = 0; j < n; ++j) {
    upper[idx] *= diag_scale;
    ++idx;
    for (int k = j + 1; k < n; ++k, ++idx) upper[idx] *= scale;
  }
  return SymmetricMatrixSample(n, std::move(upper));
}

SymmetricMatrixSample sample_matrix(const Ensemble& ensemble, int n, Rng& rng) {
  return w2_variant_matrix(ensemble.law, n, ensemble.diag_multiplier, rng);
}

}  // namespace wigstat
