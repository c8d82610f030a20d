#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

#include "wigstat/rng.hpp"

namespace wigstat {

enum class SamplerKind { gaussian, rademacher, uniform, two_point };

inline constexpr int kDefaultCumulantOrder = 8;

/// Centered real distribution of the Wigner entries V_jk.
///
/// Moments and cumulants are stored 1-based in the sense that `moment(1)` is
/// the mean (always 0) and `moment(2)` the variance w². Laws are immutable
/// once built and may be shared freely between workers.
class EntryLaw {
 public:
  /// Builds a catalog law with variance `w2`. `p` is only read for
  /// two_point, where the atom a = w*sqrt((1-p)/p) carries probability p.
  static EntryLaw make(SamplerKind kind, double w2, double p = 0.5,
                       int order = kDefaultCumulantOrder);

  SamplerKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double w2() const { return w2_; }
  double p() const { return p_; }
  int order() const { return static_cast<int>(moments_.size()); }

  double moment(int k) const;
  double cumulant(int k) const;
  std::span<const double> moments() const { return moments_; }
  std::span<const double> cumulants() const { return cumulants_; }

  // The characteristic function E{exp(itV)} is entire for every catalog law;
  // its logarithm is entire only for the gaussian one.
  bool cf_entire() const { return true; }
  bool log_cf_entire() const { return kind_ == SamplerKind::gaussian; }

  /// E{exp(i y V)} in closed form.
  std::complex<double> cf(double y) const;

  /// Same law with moments recomputed up to `order`.
  EntryLaw with_order(int order) const;

  /// Canonical spec string, e.g. `two_point:p=0.25,w2=1`.
  std::string spec() const;

  double sample(Rng& rng) const;
  /// Fills `out` with i.i.d. draws; consumes the generator exactly as
  /// repeated draws from a single distribution object would.
  void fill(std::span<double> out, Rng& rng) const;

  /// For two_point: the two atoms (a, b). Other kinds return (+w, -w).
  std::pair<double, double> atoms() const;

 private:
  EntryLaw() = default;

  SamplerKind kind_ = SamplerKind::gaussian;
  std::string name_;
  double w2_ = 1.0;
  double p_ = 0.5;
  double a_ = 1.0;
  double b_ = -1.0;
  std::vector<double> moments_;
  std::vector<double> cumulants_;
};

/// Moment-cumulant recursion. Index 0 holds the first moment, which must be
/// exactly zero.
std::vector<double> cumulants_from_moments(std::span<const double> moments);
std::vector<double> moments_from_cumulants(std::span<const double> cumulants);

/// Parses `gaussian:w2=1.0`, `rademacher:w2=1.0`, `uniform:w2=1.0`,
/// `two_point:p=0.25,w2=1.0`. Throws ConfigError naming the bad token.
EntryLaw parse_law(std::string_view spec, int order = kDefaultCumulantOrder);

std::string format_number(double x);

}  // namespace wigstat
