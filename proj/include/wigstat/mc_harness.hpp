#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wigstat/ensemble.hpp"
#include "wigstat/limit_law.hpp"
#include "wigstat/probe.hpp"
#include "wigstat/spectral.hpp"
#include "wigstat/test_function.hpp"

namespace wigstat {

struct McConfig {
  Ensemble ensemble;
  Probe probe = Probe::identity();
  TestFunction phi = TestFunction::polynomial({0.0, 1.0});
  int n = 64;
  int reps = 1000;
  std::uint64_t seed = 1;
  std::vector<double> x_grid;
  std::vector<int> n_sweep;
  // Worker count; results do not depend on it.
  int threads = 1;
  Evaluation evaluation = Evaluation::automatic;

  /// Throws ConfigError unless reps >= 100, n >= 16 and every sweep n >= 16.
  void validate() const;
};

inline constexpr int kMinReps = 100;
inline constexpr int kMinDimension = 16;

/// Unbiased k-statistics with delete-1 jackknife standard errors.
struct KStatistics {
  std::size_t count = 0;
  double mean = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double se_mean = 0.0;
  double se_k2 = 0.0;
  double se_k3 = 0.0;
  double se_k4 = 0.0;
};

/// Throws std::invalid_argument for fewer than 5 samples.
KStatistics k_statistics(std::span<const double> samples);

/// Empirical characteristic function mean(exp(i x s)) of (already centered)
/// samples at each x.
std::vector<std::complex<double>> ecf(std::span<const double> samples,
                                      std::span<const double> x_grid);

/// `reps` samples of xi at dimension n. Replica r uses the generator seeded
/// by child_seed(child_seed(seed, n), r), so the output does not depend on
/// the worker count. Eigensolver failures are rethrown as NumericalError
/// naming the replica.
std::vector<double> sample_statistic(const Ensemble& ensemble, const Probe& probe,
                                     const TestFunction& phi, int n, int reps,
                                     std::uint64_t seed, int threads = 1,
                                     Evaluation evaluation = Evaluation::automatic);

struct SweepPoint {
  int n = 0;
  KStatistics stats;
};

/// What a run reports, without the raw samples; this is also what a summary
/// file carries.
struct McSummary {
  std::string ensemble;  // goe | wigner
  std::string law;
  std::string probe;
  std::string phi;
  double diag_multiplier = 2.0;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  KStatistics stats;
  std::vector<double> x_grid;
  std::vector<std::complex<double>> ecf;
  std::vector<SweepPoint> sweep;
};

struct McRun {
  McSummary summary;
  std::vector<double> samples;
  std::vector<double> centered;
};

McRun run(const McConfig& config);

struct ComparisonRow {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double theory = 0.0;
  double z = 0.0;
  // Which computation produced the theoretical value.
  std::string source;
  // Informational rows (the n-sweep) do not decide the verdict.
  bool gated = true;
  bool pass = true;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double ecf_discrepancy = 0.0;
  double ecf_threshold = 0.0;
  // Largest truncation bound on the grid; zero when the series was summed
  // in closed form.
  double tail_bound = 0.0;
  bool ecf_resummed = false;
  bool ecf_pass = true;
  bool sweep_monotone = true;

  bool passed() const;
};

inline constexpr double kZThreshold = 4.0;

/// Identifies a limit law for metadata checks.
struct LimitLabel {
  std::string law;
  std::string probe;
  std::string phi;
  double diag_multiplier = 2.0;
};

/// Compares a run against the limit law computed for the same entry law,
/// probe and test function. Throws ConfigError on mismatched metadata.
ComparisonReport compare(const McSummary& run, const LimitLaw& limit, const EntryLaw& law,
                         const LimitLabel& label);

/// True when |k2(n) - target| does not grow along the sweep by more than
/// `tolerance_se` combined standard errors between consecutive dimensions.
bool sweep_non_increasing(const std::vector<SweepPoint>& sweep, double target,
                          double tolerance_se = 2.0);

}  // namespace wigstat
