#include "wigstat/entry_law.hpp"

#include <cmath>

#include "wigstat/errors.hpp"
#include "wigstat/spec_parsing.hpp"

namespace wigstat {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> catalog_moments(SamplerKind kind, double w2, double p, double a, double b,
                                    int order) {
  const double w = std::sqrt(w2);
  std::vector<double> mu(static_cast<std::size_t>(order), 0.0);
  for (int k = 1; k <= order; ++k) {
    double m = 0.0;
    switch (kind) {
      case SamplerKind::gaussian:
        if (k % 2 == 0) {
          m = std::pow(w, k);
          for (int j = k - 1; j > 1; j -= 2) m *= j;
        }
        break;
      case SamplerKind::rademacher:
        if (k % 2 == 0) m = std::pow(w, k);
        break;
      case SamplerKind::uniform:
        if (k % 2 == 0) m = std::pow(std::sqrt(3.0) * w, k) / (k + 1);
        break;
      case SamplerKind::two_point:
        m = p * std::pow(a, k) + (1.0 - p) * std::pow(b, k);
        break;
    }
    mu[static_cast<std::size_t>(k - 1)] = m;
  }
  mu[0] = 0.0;
  if (order >= 2) mu[1] = w2;
  return mu;
}

const char* kind_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::gaussian: return "gaussian";
    case SamplerKind::rademacher: return "rademacher";
    case SamplerKind::uniform: return "uniform";
    case SamplerKind::two_point: return "two_point";
  }
  return "?";
}

}  // namespace

std::vector<double> cumulants_from_moments(std::span<const double> moments) {
  if (moments.size() < 2)
    throw std::invalid_argument("cumulants_from_moments: need at least two moments");
  if (moments[0] != 0.0)
    throw std::invalid_argument("cumulants_from_moments: first moment must be zero");
  const int order = static_cast<int>(moments.size());
  // mu(j) with mu(0) = 1.
  auto mu = [&](int j) { return j == 0 ? 1.0 : moments[static_cast<std::size_t>(j - 1)]; };
  std::vector<double> kappa(moments.size(), 0.0);
  for (int n = 1; n <= order; ++n) {
    double acc = mu(n);
    for (int m = 1; m < n; ++m)
      acc -= binomial(n - 1, m - 1) * kappa[static_cast<std::size_t>(m - 1)] * mu(n - m);
    kappa[static_cast<std::size_t>(n - 1)] = acc;
  }
  return kappa;
}

std::vector<double> moments_from_cumulants(std::span<const double> cumulants) {
  if (cumulants.empty())
    throw std::invalid_argument("moments_from_cumulants: empty cumulant list");
  const int order = static_cast<int>(cumulants.size());
  std::vector<double> mu(cumulants.size(), 0.0);
  auto mu_at = [&](int j) { return j == 0 ? 1.0 : mu[static_cast<std::size_t>(j - 1)]; };
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (int m = 1; m <= n; ++m)
      acc += binomial(n - 1, m - 1) * cumulants[static_cast<std::size_t>(m - 1)] * mu_at(n - m);
    mu[static_cast<std::size_t>(n - 1)] = acc;
  }
  return mu;
}

EntryLaw EntryLaw::make(SamplerKind kind, double w2, double p, int order) {
  if (!(w2 > 0.0) || !std::isfinite(w2))
    throw std::invalid_argument("entry law: variance w2 must be positive");
  if (order < 4) throw std::invalid_argument("entry law: cumulant order must be at least 4");
  EntryLaw law;
  law.kind_ = kind;
  law.name_ = kind_name(kind);
  law.w2_ = w2;
  const double w = std::sqrt(w2);
  law.a_ = w;
  law.b_ = -w;
  if (kind == SamplerKind::two_point) {
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("two_point: p must lie strictly inside (0, 1)");
    law.p_ = p;
    law.a_ = w * std::sqrt((1.0 - p) / p);
    law.b_ = -w * std::sqrt(p / (1.0 - p));
  } else {
    law.p_ = 0.5;
  }
  law.moments_ = catalog_moments(kind, w2, law.p_, law.a_, law.b_, order);
  if (kind == SamplerKind::gaussian) {
    law.cumulants_.assign(static_cast<std::size_t>(order), 0.0);
    law.cumulants_[1] = w2;
  } else {
    law.cumulants_ = cumulants_from_moments(law.moments_);
    law.cumulants_[1] = w2;
  }
  return law;
}

double EntryLaw::moment(int k) const {
  if (k < 1 || k > order()) throw std::out_of_range("moment order out of range");
  return moments_[static_cast<std::size_t>(k - 1)];
}

double EntryLaw::cumulant(int k) const {
  if (k < 1 || k > order()) throw std::out_of_range("cumulant order out of range");
  return cumulants_[static_cast<std::size_t>(k - 1)];
}

EntryLaw EntryLaw::with_order(int order) const { return make(kind_, w2_, p_, order); }

std::string EntryLaw::spec() const {
  if (kind_ == SamplerKind::two_point)
    return name_ + ":p=" + format_number(p_) + ",w2=" + format_number(w2_);
  return name_ + ":w2=" + format_number(w2_);
}

std::pair<double, double> EntryLaw::atoms() const { return {a_, b_}; }

std::complex<double> EntryLaw::cf(double y) const {
  switch (kind_) {
    case SamplerKind::gaussian:
      return std::exp(-0.5 * w2_ * y * y);
    case SamplerKind::rademacher:
      return std::cos(std::sqrt(w2_) * y);
    case SamplerKind::uniform: {
      const double u = std::sqrt(3.0 * w2_) * y;
      return std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
    }
    case SamplerKind::two_point:
      return p_ * std::complex<double>(std::cos(a_ * y), std::sin(a_ * y)) +
             (1.0 - p_) * std::complex<double>(std::cos(b_ * y), std::sin(b_ * y));
  }
  return 1.0;
}

double EntryLaw::sample(Rng& rng) const {
  switch (kind_) {
    case SamplerKind::gaussian:
      return std::normal_distribution<double>(0.0, std::sqrt(w2_))(rng);
    case SamplerKind::rademacher:
      return (rng() >> 63) ? a_ : b_;
    case SamplerKind::uniform: {
      const double half = std::sqrt(3.0 * w2_);
      return std::uniform_real_distribution<double>(-half, half)(rng);
    }
    case SamplerKind::two_point:
      return std::generate_canonical<double, 53>(rng) < p_ ? a_ : b_;
  }
  return 0.0;
}

void EntryLaw::fill(std::span<double> out, Rng& rng) const {
  switch (kind_) {
    case SamplerKind::gaussian: {
      std::normal_distribution<double> normal(0.0, std::sqrt(w2_));
      for (double& x : out) x = normal(rng);
      return;
    }
    case SamplerKind::uniform: {
      const double half = std::sqrt(3.0 * w2_);
      std::uniform_real_distribution<double> unif(-half, half);
      for (double& x : out) x = unif(rng);
      return;
    }
    default:
      for (double& x : out) x = sample(rng);
  }
}

EntryLaw parse_law(std::string_view spec, int order) {
  const auto tokens = detail::tokenize_spec(spec);
  const std::string context = "law spec '" + std::string(spec) + "'";
  SamplerKind kind;
  if (tokens.head == "gaussian") kind = SamplerKind::gaussian;
  else if (tokens.head == "rademacher") kind = SamplerKind::rademacher;
  else if (tokens.head == "uniform") kind = SamplerKind::uniform;
  else if (tokens.head == "two_point") kind = SamplerKind::two_point;
  else throw ConfigError("unknown entry law '" + tokens.head + "'");
  if (!tokens.positional.empty())
    throw ConfigError("unexpected token '" + tokens.positional.front() + "' in " + context);

  double w2 = 1.0;
  double p = 0.5;
  bool have_p = false;
  for (const auto& [key, value] : tokens.named) {
    if (key == "w2") {
      w2 = detail::parse_double(value, context);
    } else if (key == "p" && kind == SamplerKind::two_point) {
      p = detail::parse_double(value, context);
      have_p = true;
    } else {
      throw ConfigError("unknown key '" + key + "' in " + context);
    }
  }
  if (kind == SamplerKind::two_point && !have_p)
    throw ConfigError("two_point law requires p in " + context);
  try {
    return EntryLaw::make(kind, w2, p, order);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(e.what()) + " in " + context);
  }
}

}  // namespace wigstat
