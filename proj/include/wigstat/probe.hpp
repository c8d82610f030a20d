#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace wigstat {

enum class ProbeFamily { identity, matrix_element, bilinear, custom };
enum class BilinearRule { delocalized, spiked };

/// A deterministic family {A^(n)} normalized so that n^{-1} Tr A^T A -> 1.
///
/// Structured families (identity, matrix element, bilinear forms) never need
/// a dense matrix: the statistic only depends on the index j or the vector
/// eta. Custom probes wrap a dense generator n -> A^(n); a probe read from a
/// file exists at a single dimension.
class Probe {
 public:
  using Generator = std::function<Eigen::MatrixXd(int)>;

  static Probe identity();
  /// `j` is 1-based, as in the probe grammar `elem:j=1`.
  static Probe matrix_element(int j);
  static Probe delocalized_bilinear();
  static Probe spiked_bilinear(double a);
  static Probe custom(Generator generator, std::string name);
  static Probe fixed_matrix(Eigen::MatrixXd a, std::string name);

  ProbeFamily family() const { return family_; }
  bool structured() const { return family_ != ProbeFamily::custom; }
  BilinearRule bilinear_rule() const { return rule_; }
  double spike() const { return spike_; }
  int element_index() const { return element_; }
  std::optional<int> fixed_dimension() const;

  /// Canonical spec string (`identity`, `elem:j=1`, `bilinear:spiked,a=0.8`...).
  const std::string& spec() const { return spec_; }

  /// Throws std::invalid_argument if `n` is not admissible for this probe.
  void check_dimension(int n) const;

  /// Unit-free vector eta with A = sqrt(n) eta eta^T (bilinear) or e_j
  /// (matrix element).
  Eigen::VectorXd bilinear_vector(int n) const;
  Eigen::MatrixXd dense(int n) const;

 private:
  Probe() = default;

  ProbeFamily family_ = ProbeFamily::identity;
  BilinearRule rule_ = BilinearRule::delocalized;
  double spike_ = 0.0;
  int element_ = 1;
  Generator generator_;
  std::optional<int> fixed_n_;
  std::string spec_;
};

enum class Provenance { exact, extrapolated, finite };

const char* to_string(Provenance p);

/// Probe functionals: n^{-1}Tr A^T A, T_A, T_{A(A+A^T)}, K^(1..3), K'^(2) and
/// the cumulant weights A_p for p = 3..max_order (a_p[0] is A_3).
struct ProbeFunctionals {
  double norm = 0.0;
  double t_a = 0.0;
  double t_ac = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double kprime2 = 0.0;
  std::vector<double> a_p;
  // When known, A_p = sum_j atoms[j]^p for every p >= 3. This lets the
  // cumulant series be summed in closed form through the entry law's
  // characteristic function.
  std::optional<std::vector<double>> atoms;
  double diag_multiplier = 2.0;

  Provenance provenance = Provenance::exact;
  // Largest |f(2n) - f(n)| over all fields for extrapolated values.
  double cauchy_gap = 0.0;
  bool flagged = false;

  double a(int p) const { return a_p.at(static_cast<std::size_t>(p - 3)); }
};

/// Values at dimension n, by closed form for structured probes and by direct
/// summation otherwise. `diag_multiplier` enters A_p through the diagonal
/// weight (sqrt(w_2)/2)^p; w_2 = 2 gives the standard weight 2^{-p/2}.
ProbeFunctionals finite_functionals(const Probe& probe, int n, int max_order = 8,
                                    double diag_multiplier = 2.0);

/// Limits n -> infinity. Catalog probes are exact; custom generators are
/// evaluated at base_n and 2*base_n and flagged when the gap exceeds
/// `gap_tolerance`. Fixed-matrix probes report their single finite value,
/// always flagged.
ProbeFunctionals limit_functionals(const Probe& probe, int max_order = 8,
                                   double diag_multiplier = 2.0, int base_n = 1000,
                                   double gap_tolerance = 1e-2);

/// Dense probe file: first line n, then n rows of n whitespace-separated reals.
Eigen::MatrixXd read_dense_matrix(const std::string& path);

/// `identity`, `elem:j=1`, `bilinear:delocalized`, `bilinear:spiked,a=0.8`,
/// `custom:file=<path>`.
Probe parse_probe(std::string_view spec);

}  // namespace wigstat
