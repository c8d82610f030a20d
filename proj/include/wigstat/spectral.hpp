#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "wigstat/ensemble.hpp"
#include "wigstat/probe.hpp"
#include "wigstat/test_function.hpp"

namespace wigstat {

/// M = Q diag(lambda) Q^T with eigenvalues ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Dense symmetric eigendecomposition. Throws NumericalError on failure.
SpectralDecomposition decompose(const SymmetricMatrixSample& m);
SpectralDecomposition decompose(const Eigen::MatrixXd& m);

/// Discrete measure sum_i weight_i delta(node_i) with
/// xi[phi] = sum_i phi(node_i) weight_i, weight_i = (Q^T A Q)_ii.
struct SpectralMeasure {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  double integrate(const TestFunction& phi) const;
  std::complex<double> integrate_exponential(double t) const;
};

/// Measure from a full decomposition: closed-form weights for structured
/// probes, diag(Q^T A Q) for custom ones.
SpectralMeasure probe_measure(const Probe& probe, const SpectralDecomposition& d);

/// Measure without eigenvectors. For bilinear and matrix-element probes M is
/// reflected so that eta maps to e_1, tridiagonalized with e_1 fixed, and the
/// tridiagonal QL iteration tracks only the first row of its eigenvector
/// matrix: weight_i = sqrt(n) |eta|^2 S_{1i}^2. Custom probes fall back to a
/// full decomposition.
SpectralMeasure probe_measure(const Probe& probe, const SymmetricMatrixSample& m);

/// Tr phi(M) A without eigenvalues for polynomial phi: Krylov moments
/// eta^T M^k eta for vector probes, and Tr M plus the Frobenius norm for the
/// identity probe up to degree 2. nullopt when neither applies.
std::optional<double> polynomial_statistic(const Probe& probe, const SymmetricMatrixSample& m,
                                           const TestFunction& phi);

enum class Evaluation {
  automatic,  // polynomial route when available, spectral otherwise
  spectral,
};

/// xi_n^A[phi] for one sample.
double statistic(const Probe& probe, const SymmetricMatrixSample& m, const TestFunction& phi,
                 Evaluation evaluation = Evaluation::automatic);

/// xi = Tr phi(M) A.
double xi(const Probe& probe, const SpectralDecomposition& d, const TestFunction& phi);
/// Reference path sum_i phi(lambda_i) (Q^T A Q)_ii with a dense A.
double xi_dense(const Probe& probe, const SpectralDecomposition& d, const TestFunction& phi);
/// xi(t) = Tr A exp(itM).
std::complex<double> xi_exponential(const Probe& probe, const SpectralDecomposition& d, double t);

/// n^{-3/2} sum_{l,m} (U(t1) A U(t2))_lm with U(t) = exp(itM).
std::complex<double> eta_statistic(const Probe& probe, const SpectralDecomposition& d, double t1,
                                   double t2);

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and sub-diagonal `sub`, plus the squared first components of the
/// normalized eigenvectors when `first_row` is non-null.
Eigen::VectorXd tridiagonal_eigen(Eigen::VectorXd diag, Eigen::VectorXd sub,
                                  Eigen::VectorXd* first_row_squared);

}  // namespace wigstat
