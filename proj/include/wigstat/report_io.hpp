#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wigstat/limit_law.hpp"
#include "wigstat/mc_harness.hpp"
#include "wigstat/volterra.hpp"

namespace wigstat {

using Json = nlohmann::ordered_json;

/// Throws NumericalError naming the JSON path of the first NaN or infinity.
void ensure_finite(const Json& value, const std::string& path = "$");

/// Limit law plus the metadata compare needs. `tail_bound` is the truncation
/// bound at the largest |x| of `x_grid`.
Json limit_to_json(const LimitLaw& limit, const LimitLabel& label, const EntryLaw& law,
                   const std::vector<double>& x_grid);

struct StoredLimit {
  LimitLaw limit;
  LimitLabel label;
};

/// Inverse of limit_to_json; throws ConfigError on missing or malformed keys.
StoredLimit limit_from_json(const Json& j);

Json summary_to_json(const McSummary& summary);
McSummary summary_from_json(const Json& j);

/// `replica,xi` header, one row per replica, 17 significant digits.
std::string samples_csv(const std::vector<double>& samples);

Json report_to_json(const ComparisonReport& report);
/// Fixed-width table for terminals.
std::string report_table(const ComparisonReport& report);

struct TransformReport {
  double step = 0.0;
  double horizon = 0.0;
  double w = 1.0;
  double tolerance = 1e-3;
  LemmaErrors lemma;
  ConvolutionErrors convolutions;
  // Same quantities on the grid with the step halved.
  LemmaErrors lemma_half;
  ConvolutionErrors convolutions_half;
  double stieltjes_residual = 0.0;
  double v1_bessel_error = 0.0;

  bool passed() const;
};

TransformReport verify_transforms(double step, double horizon, double w,
                                  const std::vector<double>& t2_values, double tolerance,
                                  int quadrature_order = 128);
Json transforms_to_json(const TransformReport& report);

Json read_json_file(const std::string& path);
/// Writes `text` to `path`; throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wigstat
