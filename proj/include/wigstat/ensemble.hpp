#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wigstat/entry_law.hpp"
#include "wigstat/rng.hpp"

namespace wigstat {

/// Real symmetric matrix stored as its packed upper triangle, row by row.
class SymmetricMatrixSample {
 public:
  SymmetricMatrixSample(int n, std::vector<double> upper);

  int n() const { return n_; }
  double operator()(int j, int k) const { return upper_[index(j, k)]; }
  const std::vector<double>& upper() const { return upper_; }

  Eigen::MatrixXd dense() const;

  static std::size_t packed_size(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2; }

 private:
  std::size_t index(int j, int k) const {
    if (j > k) std::swap(j, k);
    const auto jj = static_cast<std::size_t>(j);
    return jj * static_cast<std::size_t>(n_) - jj * (jj - 1) / 2 + static_cast<std::size_t>(k - j);
  }

  int n_;
  std::vector<double> upper_;
};

/// GOE or a Wigner ensemble with i.i.d. entries V_jk. The diagonal is
/// W_jj = sqrt(diag_multiplier) * V_jj; the standard normalization uses
/// diag_multiplier = 2, so E{W_jk^2} = w^2 (1 + delta_jk).
struct Ensemble {
  enum class Kind { goe, wigner };

  Kind kind = Kind::goe;
  EntryLaw law = EntryLaw::make(SamplerKind::gaussian, 1.0);
  double diag_multiplier = 2.0;

  static Ensemble goe(double w2, int order = kDefaultCumulantOrder);
  static Ensemble wigner(EntryLaw law, double diag_multiplier = 2.0);

  double w2() const { return law.w2(); }
};

/// M = n^{-1/2} W drawn from `ensemble`. Throws std::invalid_argument for n < 2.
SymmetricMatrixSample sample_matrix(const Ensemble& ensemble, int n, Rng& rng);

/// Matrix with off-diagonal variance w^2/n and diagonal variance
/// diag_multiplier * w^2 / n.
SymmetricMatrixSample w2_variant_matrix(const EntryLaw& law, int n, double diag_multiplier,
                                        Rng& rng);

}  // namespace wigstat
