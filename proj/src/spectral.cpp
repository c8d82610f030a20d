#include "wigstat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include <Eigen/Eigenvalues>

#include "wigstat/errors.hpp"
#include "wigstat/numeric.hpp"

namespace wigstat {
namespace {

using cplx = std::complex<double>;

void check_probe_dimension(const Probe& probe, int n) {
  try {
    probe.check_dimension(n);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("dimension mismatch: ") + e.what());
  }
}

// Householder reflection H = I - beta v v^T with H u = -sign(u_0) e_1, applied
// as M <- H M H.
void reflect_to_first_axis(Eigen::MatrixXd& m, const Eigen::VectorXd& u) {
  if (u(0) == 1.0 && u.tail(u.size() - 1).isZero(0.0)) return;
  Eigen::VectorXd v = u;
  v(0) += u(0) >= 0.0 ? 1.0 : -1.0;
  const double beta = 2.0 / v.squaredNorm();
  const Eigen::VectorXd p = beta * (m * v);
  const double k = 0.5 * beta * v.dot(p);
  const Eigen::VectorXd q = p - k * v;
  m.noalias() -= v * q.transpose();
  m.noalias() -= q * v.transpose();
}

}  // namespace

Eigen::VectorXd tridiagonal_eigen(Eigen::VectorXd d, Eigen::VectorXd sub,
                                  Eigen::VectorXd* first_row_squared) {
  const Eigen::Index n = d.size();
  if (sub.size() != std::max<Eigen::Index>(n - 1, 0))
    throw std::invalid_argument("tridiagonal_eigen: sub-diagonal has the wrong length");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  if (n > 1) e.head(n - 1) = sub;
  const bool track = first_row_squared != nullptr;
  Eigen::VectorXd z;
  if (track) {
    z = Eigen::VectorXd::Zero(n);
    if (n > 0) z(0) = 1.0;
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxIterations = 60;

  // Implicit QL with Wilkinson-style shifts.
  for (Eigen::Index l = 0; l < n; ++l) {
    int iter = 0;
    Eigen::Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > kMaxIterations)
          throw NumericalError("tridiagonal QL iteration did not converge");
        double g = (d(l + 1) - d(l)) / (2.0 * e(l));
        // Entries of a Wigner sample are O(1), so plain square roots cannot
        // overflow here and are much cheaper than hypot.
        double r = std::sqrt(g * g + 1.0);
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Eigen::Index i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          double f = s * e(i);
          const double b = c * e(i);
          r = std::sqrt(f * f + g * g);
          e(i + 1) = r;
          if (r == 0.0) {
            d(i + 1) -= p;
            e(m) = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          if (track) {
            f = z(i + 1);
            z(i + 1) = s * z(i) + c * f;
            z(i) = c * z(i) - s * f;
          }
        }
        if (underflow) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0.0;
      }
    } while (m != l);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return d(a) < d(b); });
  Eigen::VectorXd sorted(n);
  for (Eigen::Index i = 0; i < n; ++i) sorted(i) = d(order[static_cast<std::size_t>(i)]);
  if (track) {
    first_row_squared->resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double zi = z(order[static_cast<std::size_t>(i)]);
      (*first_row_squared)(i) = zi * zi;
    }
  }
  return sorted;
}

SpectralDecomposition decompose(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition decompose(const SymmetricMatrixSample& m) { return decompose(m.dense()); }

double SpectralMeasure::integrate(const TestFunction& phi) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += phi(nodes(i)) * weights(i);
  return acc;
}

std::complex<double> SpectralMeasure::integrate_exponential(double t) const {
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < nodes.size(); ++i)
    acc += weights(i) * cplx(std::cos(t * nodes(i)), std::sin(t * nodes(i)));
  return acc;
}

SpectralMeasure probe_measure(const Probe& probe, const SpectralDecomposition& d) {
  const int n = d.n();
  check_probe_dimension(probe, n);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  SpectralMeasure out{d.eigenvalues, Eigen::VectorXd(n)};
  switch (probe.family()) {
    case ProbeFamily::identity:
      out.weights.setOnes();
      break;
    case ProbeFamily::matrix_element:
      out.weights = sqrt_n * d.eigenvectors.row(probe.element_index() - 1).transpose().array().square();
      break;
    case ProbeFamily::bilinear: {
      const Eigen::VectorXd proj = d.eigenvectors.transpose() * probe.bilinear_vector(n);
      out.weights = sqrt_n * proj.array().square();
      break;
    }
    case ProbeFamily::custom: {
      const Eigen::MatrixXd a = probe.dense(n);
      out.weights = (d.eigenvectors.transpose() * a * d.eigenvectors).diagonal();
      break;
    }
  }
  return out;
}

SpectralMeasure probe_measure(const Probe& probe, const SymmetricMatrixSample& sample) {
  const int n = sample.n();
  check_probe_dimension(probe, n);
  if (probe.family() == ProbeFamily::custom) return probe_measure(probe, decompose(sample));

  Eigen::MatrixXd m = sample.dense();
  double scale = 1.0;
  const bool weighted = probe.family() != ProbeFamily::identity;
  if (weighted) {
    const Eigen::VectorXd eta = probe.bilinear_vector(n);
    const double norm2 = eta.squaredNorm();
    scale = std::sqrt(static_cast<double>(n)) * norm2;
    reflect_to_first_axis(m, eta / std::sqrt(norm2));
  }
  // Householder tridiagonalization acts on rows 2..n, so e_1 is preserved.
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(m);
  SpectralMeasure out;
  Eigen::VectorXd first_row;
  out.nodes = tridiagonal_eigen(tri.diagonal(), tri.subDiagonal(), weighted ? &first_row : nullptr);
  if (weighted) {
    out.weights = scale * first_row;
  } else {
    out.weights = Eigen::VectorXd::Ones(n);
  }
  return out;
}

std::optional<double> polynomial_statistic(const Probe& probe, const SymmetricMatrixSample& m,
                                           const TestFunction& phi) {
  const auto& c = phi.coefficients();
  if (!c || probe.family() == ProbeFamily::custom) return std::nullopt;
  const int n = m.n();
  check_probe_dimension(probe, n);
  const auto& upper = m.upper();

  if (probe.family() == ProbeFamily::identity) {
    if (c->size() > 3) return std::nullopt;
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> squares(upper.size());
    std::size_t pos = 0;
    for (int j = 0; j < n; ++j) {
      diag[static_cast<std::size_t>(j)] = upper[pos];
      squares[pos] = upper[pos] * upper[pos];
      ++pos;
      for (int k = j + 1; k < n; ++k, ++pos) squares[pos] = 2.0 * upper[pos] * upper[pos];
    }
    double out = (*c)[0] * n;
    if (c->size() > 1) out += (*c)[1] * pairwise_sum(std::span<const double>(diag));
    if (c->size() > 2) out += (*c)[2] * pairwise_sum(std::span<const double>(squares));
    return out;
  }

  // A = sqrt(n) eta eta^T and eta^T M^k eta = u_floor(k/2) . u_ceil(k/2), u_i = M^i eta.
  const int degree = static_cast<int>(c->size()) - 1;
  std::vector<Eigen::VectorXd> u{probe.bilinear_vector(n)};
  for (int i = 1; i <= (degree + 1) / 2; ++i) {
    const Eigen::VectorXd& x = u.back();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    std::size_t pos = 0;
    for (int j = 0; j < n; ++j) {
      double acc = upper[pos++] * x(j);
      const double xj = x(j);
      for (int k = j + 1; k < n; ++k, ++pos) {
        acc += upper[pos] * x(k);
        y(k) += upper[pos] * xj;
      }
      y(j) += acc;
    }
    u.push_back(std::move(y));
  }
  double out = 0.0;
  for (int k = 0; k <= degree; ++k) {
    const double coefficient = (*c)[static_cast<std::size_t>(k)];
    if (coefficient != 0.0) out += coefficient * u[k / 2].dot(u[(k + 1) / 2]);
  }
  return std::sqrt(static_cast<double>(n)) * out;
}

double statistic(const Probe& probe, const SymmetricMatrixSample& m, const TestFunction& phi,
                 Evaluation evaluation) {
  if (evaluation == Evaluation::automatic)
    if (const auto value = polynomial_statistic(probe, m, phi)) return *value;
  return probe_measure(probe, m).integrate(phi);
}

double xi(const Probe& probe, const SpectralDecomposition& d, const TestFunction& phi) {
  return probe_measure(probe, d).integrate(phi);
}

double xi_dense(const Probe& probe, const SpectralDecomposition& d, const TestFunction& phi) {
  const int n = d.n();
  check_probe_dimension(probe, n);
  const Eigen::MatrixXd a = probe.dense(n);
  const Eigen::VectorXd diag = (d.eigenvectors.transpose() * a * d.eigenvectors).diagonal();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += phi(d.eigenvalues(i)) * diag(i);
  return acc;
}

std::complex<double> xi_exponential(const Probe& probe, const SpectralDecomposition& d, double t) {
  return probe_measure(probe, d).integrate_exponential(t);
}

std::complex<double> eta_statistic(const Probe& probe, const SpectralDecomposition& d, double t1,
                                   double t2) {
  const int n = d.n();
  check_probe_dimension(probe, n);
  const Eigen::VectorXd proj = d.eigenvectors.transpose() * Eigen::VectorXd::Ones(n);
  Eigen::VectorXcd phase1(n), phase2(n);
  for (int i = 0; i < n; ++i) {
    const double lam = d.eigenvalues(i);
    phase1(i) = proj(i) * cplx(std::cos(t1 * lam), std::sin(t1 * lam));
    phase2(i) = proj(i) * cplx(std::cos(t2 * lam), std::sin(t2 * lam));
  }
  const Eigen::MatrixXcd q = d.eigenvectors.cast<cplx>();
  // U(t) 1 = Q (exp(it lambda) * Q^T 1); U is symmetric.
  const Eigen::VectorXcd left = q * phase1;
  const Eigen::VectorXcd right = q * phase2;
  const Eigen::MatrixXcd a = probe.dense(n).cast<cplx>();
  const cplx value = (left.transpose() * a * right)(0, 0);
  return value / std::pow(static_cast<double>(n), 1.5);
}

}  // namespace wigstat
