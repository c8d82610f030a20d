#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wigstat/ensemble.hpp"
#include "wigstat/mc_harness.hpp"
#include "wigstat/probe.hpp"
#include "wigstat/quadrature.hpp"
#include "wigstat/test_function.hpp"
#include "wigstat/volterra.hpp"

namespace wigstat {

/// Evenly spaced grid written `start:stop:count`.
struct LinearGrid {
  double start = -2.0;
  double stop = 2.0;
  int count = 41;

  std::vector<double> points() const;
  bool operator==(const LinearGrid&) const = default;
};

/// Experiment description read from an INI-style file:
///
///   [ensemble]        kind = goe | wigner, law = <law spec>, diag_multiplier
///   [probe]           spec = <probe spec>
///   [test_function]   spec = <test function spec>
///   [mc]              n, reps, seed, x_grid = start:stop:count, n_sweep = a,b,...,
///                     evaluation = auto | spectral
///   [limits]          quadrature_order, cumulant_order, tail_tolerance
///   [transforms]      step, horizon, t2_values = a,b,..., tolerance
///
/// Every key is optional; unknown sections and keys are errors. Catalog specs
/// are stored in canonical form, so render(parse(text)) is a fixed point.
struct ExperimentConfig {
  std::string ensemble_kind = "goe";
  std::string law = "gaussian:w2=1";
  double diag_multiplier = 2.0;
  std::string probe = "identity";
  std::string test_function = "poly:0,1";

  int n = 64;
  int reps = 1000;
  std::uint64_t seed = 1;
  LinearGrid x_grid;
  std::vector<int> n_sweep;
  std::string evaluation = "auto";

  int quadrature_order = kDefaultQuadratureOrder;
  int cumulant_order = 8;
  double tail_tolerance = 1e-3;

  double step = 0.01;
  double horizon = 4.0;
  std::vector<double> t2_values{0.0, 0.5, 1.0, 2.0};
  double transform_tolerance = 1e-3;

  bool operator==(const ExperimentConfig&) const = default;

  EntryLaw entry_law() const;
  Ensemble ensemble() const;
  Probe make_probe() const;
  TestFunction phi() const;
  Quadratures quadratures() const;
  TimeGrid time_grid() const;
  McConfig mc_config(int threads = 1) const;

  /// Limit law of the configured statistic, with catalog probe limits.
  LimitLaw limit_law() const;
  LimitLabel limit_label() const;
};

/// Throws ConfigError naming the offending line, key or catalog token.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string render_config(const ExperimentConfig& config);

}  // namespace wigstat
