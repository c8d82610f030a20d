#include "wigstat/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "wigstat/errors.hpp"
#include "wigstat/numeric.hpp"
#include "wigstat/rng.hpp"
#include "wigstat/spectral.hpp"

namespace wigstat {
namespace {

struct CentralMoments {
  double m2, m3, m4;
};

// Central moments of a sample of size `count` from its raw power sums about
// an arbitrary origin.
CentralMoments central_from_power_sums(double s1, double s2, double s3, double s4, double count) {
  const double mu = s1 / count;
  const double r2 = s2 / count;
  const double r3 = s3 / count;
  const double r4 = s4 / count;
  const double mu2 = mu * mu;
  return {r2 - mu2, r3 - 3.0 * r2 * mu + 2.0 * mu2 * mu,
          r4 - 4.0 * r3 * mu + 6.0 * r2 * mu2 - 3.0 * mu2 * mu2};
}

struct KValues {
  double k2, k3, k4;
};

KValues k_from_central(const CentralMoments& m, double n) {
  const double k2 = n / (n - 1.0) * m.m2;
  const double k3 = n * n * m.m3 / ((n - 1.0) * (n - 2.0));
  const double k4 = n * n * ((n + 1.0) * m.m4 - 3.0 * (n - 1.0) * m.m2 * m.m2) /
                    ((n - 1.0) * (n - 2.0) * (n - 3.0));
  return {k2, k3, k4};
}

double sum(const std::vector<double>& v) { return pairwise_sum(std::span<const double>(v)); }

double jackknife_se(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  const double mean = sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return std::sqrt((n - 1.0) / n * sum(sq));
}

double z_score(double estimate, double theory, double se) {
  return se > 0.0 ? (estimate - theory) / se : 0.0;
}

ComparisonRow make_row(std::string name, double estimate, double se, double theory,
                       std::string source) {
  ComparisonRow row{std::move(name), estimate, se, theory, 0.0, std::move(source)};
  if (se > 0.0) {
    row.z = z_score(estimate, theory, se);
    row.pass = std::abs(row.z) <= kZThreshold;
  } else {
    // A degenerate statistic has zero spread; compare at rounding level.
    row.pass = std::abs(estimate - theory) <= 1e-9 * std::max(1.0, std::abs(theory));
  }
  return row;
}

}  // namespace

void McConfig::validate() const {
  if (reps < kMinReps) throw ConfigError("mc.reps must be at least 100, got " + std::to_string(reps));
  if (n < kMinDimension) throw ConfigError("mc.n must be at least 16, got " + std::to_string(n));
  for (int m : n_sweep)
    if (m < kMinDimension)
      throw ConfigError("mc.n_sweep entries must be at least 16, got " + std::to_string(m));
  if (threads < 1) throw ConfigError("thread count must be positive");
  for (double x : x_grid)
    if (!std::isfinite(x)) throw ConfigError("mc.x_grid must be finite");
  if (const auto fixed = probe.fixed_dimension()) {
    if (*fixed != n) throw ConfigError("probe file dimension does not match mc.n");
    if (!n_sweep.empty()) throw ConfigError("a probe read from a file admits no n-sweep");
  }
}

KStatistics k_statistics(std::span<const double> samples) {
  if (samples.size() < 5) throw std::invalid_argument("k-statistics need at least 5 samples");
  const std::size_t count = samples.size();
  const double n = static_cast<double>(count);
  const double mean = pairwise_sum(samples) / n;

  std::vector<double> d(count), d2(count), d3(count), d4(count);
  for (std::size_t i = 0; i < count; ++i) {
    d[i] = samples[i] - mean;
    d2[i] = d[i] * d[i];
    d3[i] = d2[i] * d[i];
    d4[i] = d2[i] * d2[i];
  }
  const double s1 = sum(d), s2 = sum(d2), s3 = sum(d3), s4 = sum(d4);

  KStatistics out;
  out.count = count;
  out.mean = mean;
  const KValues full = k_from_central(central_from_power_sums(s1, s2, s3, s4, n), n);
  out.k2 = full.k2;
  out.k3 = full.k3;
  out.k4 = full.k4;
  out.se_mean = std::sqrt(std::max(full.k2, 0.0) / n);

  std::vector<double> j2(count), j3(count), j4(count);
  for (std::size_t i = 0; i < count; ++i) {
    const KValues loo = k_from_central(
        central_from_power_sums(s1 - d[i], s2 - d2[i], s3 - d3[i], s4 - d4[i], n - 1.0), n - 1.0);
    j2[i] = loo.k2;
    j3[i] = loo.k3;
    j4[i] = loo.k4;
  }
  out.se_k2 = jackknife_se(j2);
  out.se_k3 = jackknife_se(j3);
  out.se_k4 = jackknife_se(j4);
  return out;
}

std::vector<std::complex<double>> ecf(std::span<const double> samples,
                                      std::span<const double> x_grid) {
  std::vector<std::complex<double>> out;
  out.reserve(x_grid.size());
  const double n = static_cast<double>(samples.size());
  std::vector<double> c(samples.size()), s(samples.size());
  for (double x : x_grid) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      c[i] = std::cos(x * samples[i]);
      s[i] = std::sin(x * samples[i]);
    }
    out.emplace_back(sum(c) / n, sum(s) / n);
  }
  return out;
}

std::vector<double> sample_statistic(const Ensemble& ensemble, const Probe& probe,
                                     const TestFunction& phi, int n, int reps,
                                     std::uint64_t seed, int threads, Evaluation evaluation) {
  probe.check_dimension(n);
  std::vector<double> out(static_cast<std::size_t>(reps));
  const std::uint64_t dimension_seed = child_seed(seed, static_cast<std::uint64_t>(n));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  int error_replica = -1;
  std::string error_message;

  auto worker = [&] {
    while (!failed.load()) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        Rng rng = make_rng(dimension_seed, static_cast<std::uint64_t>(r));
        const SymmetricMatrixSample m = sample_matrix(ensemble, n, rng);
        out[static_cast<std::size_t>(r)] = statistic(probe, m, phi, evaluation);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (error_replica < 0 || r < error_replica) {
          error_replica = r;
          error_message = e.what();
        }
        failed.store(true);
      }
    }
  };

  const int workers = std::clamp(threads, 1, std::max(1, reps));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error_replica >= 0)
    throw NumericalError("replica " + std::to_string(error_replica) + ": " + error_message);
  return out;
}

McRun run(const McConfig& config) {
  config.validate();
  McRun out;
  McSummary& s = out.summary;
  s.ensemble = config.ensemble.kind == Ensemble::Kind::goe ? "goe" : "wigner";
  s.law = config.ensemble.law.spec();
  s.probe = config.probe.spec();
  s.phi = config.phi.name();
  s.diag_multiplier = config.ensemble.diag_multiplier;
  s.n = config.n;
  s.reps = config.reps;
  s.seed = config.seed;
  s.x_grid = config.x_grid;

  out.samples = sample_statistic(config.ensemble, config.probe, config.phi, config.n, config.reps,
                                 config.seed, config.threads, config.evaluation);
  s.stats = k_statistics(out.samples);
  out.centered.resize(out.samples.size());
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.centered[i] = out.samples[i] - s.stats.mean;
  s.ecf = ecf(out.centered, s.x_grid);

  for (int m : config.n_sweep) {
    if (m == config.n) {
      s.sweep.push_back({m, s.stats});
      continue;
    }
    const auto samples = sample_statistic(config.ensemble, config.probe, config.phi, m,
                                          config.reps, config.seed, config.threads, config.evaluation);
    s.sweep.push_back({m, k_statistics(samples)});
  }
  return out;
}

bool ComparisonReport::passed() const {
  if (!ecf_pass) return false;
  return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return !r.gated || r.pass; });
}

bool sweep_non_increasing(const std::vector<SweepPoint>& sweep, double target,
                          double tolerance_se) {
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const double before = std::abs(sweep[i - 1].stats.k2 - target);
    const double after = std::abs(sweep[i].stats.k2 - target);
    const double se = std::hypot(sweep[i - 1].stats.se_k2, sweep[i].stats.se_k2);
    if (after > before + tolerance_se * se) return false;
  }
  return true;
}

ComparisonReport compare(const McSummary& run, const LimitLaw& limit, const EntryLaw& law,
                         const LimitLabel& label) {
  auto mismatch = [](const char* what, const std::string& a, const std::string& b) {
    throw ConfigError(std::string("metadata mismatch in ") + what + ": run has '" + a +
                      "', limit has '" + b + "'");
  };
  if (run.probe != label.probe) mismatch("probe", run.probe, label.probe);
  if (run.phi != label.phi) mismatch("test_function", run.phi, label.phi);
  if (run.law != label.law) mismatch("law", run.law, label.law);
  if (run.diag_multiplier != label.diag_multiplier)
    mismatch("diag_multiplier", std::to_string(run.diag_multiplier),
             std::to_string(label.diag_multiplier));
  if (law.spec() != label.law) mismatch("law", law.spec(), label.law);

  ComparisonReport report;
  const KStatistics& k = run.stats;
  report.rows.push_back(make_row("k2", k.k2, k.se_k2, limit.variance(),
                                 limit.w2_corr ? "v_w + w2_corr" : "v_w"));
  const double k3_theory = limit.tail.empty() ? 0.0 : limit.tail[0];
  const double k4_theory = limit.tail.size() < 2 ? 0.0 : limit.tail[1];
  report.rows.push_back(make_row("k3", k.k3, k.se_k3, k3_theory, "tail[3]"));
  report.rows.push_back(make_row("k4", k.k4, k.se_k4, k4_theory, "tail[4]"));

  for (const SweepPoint& p : run.sweep) {
    ComparisonRow row = make_row("k2@n=" + std::to_string(p.n), p.stats.k2, p.stats.se_k2,
                                 limit.variance(), "v_w");
    row.gated = false;
    report.rows.push_back(std::move(row));
  }
  report.sweep_monotone = sweep_non_increasing(run.sweep, limit.variance());

  if (run.ecf.size() != run.x_grid.size())
    throw std::invalid_argument("ECF table and x grid differ in length");
  report.ecf_resummed = true;
  for (std::size_t i = 0; i < run.x_grid.size(); ++i) {
    const LogCfValue theory = log_cf(run.x_grid[i], limit, law);
    report.ecf_discrepancy = std::max(report.ecf_discrepancy, std::abs(run.ecf[i] - theory.cf));
    if (!theory.resummed) {
      report.ecf_resummed = false;
      report.tail_bound = std::max(report.tail_bound, theory.tail_bound);
    }
  }
  if (run.x_grid.empty()) report.ecf_resummed = false;
  report.ecf_threshold = 5.0 / std::sqrt(static_cast<double>(run.reps)) + report.tail_bound;
  report.ecf_pass = report.ecf_discrepancy <= report.ecf_threshold;
  return report;
}

}  // namespace wigstat
