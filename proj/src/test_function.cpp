#include "wigstat/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "wigstat/entry_law.hpp"
#include "wigstat/errors.hpp"
#include "wigstat/spec_parsing.hpp"

namespace wigstat {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::none: return "none";
  }
  return "?";
}

TestFunction::TestFunction(Fn f, Fn df, Parity parity, std::string name)
    : f_(std::move(f)), df_(std::move(df)), parity_(parity), name_(std::move(name)) {}

TestFunction TestFunction::polynomial(std::vector<double> c) {
  if (c.empty() || c.size() > 7)
    throw std::invalid_argument("polynomial test functions have 1 to 7 coefficients");
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  bool has_even = false;
  bool has_odd = false;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0.0) (k % 2 == 0 ? has_even : has_odd) = true;
  const Parity parity = has_odd && !has_even ? Parity::odd
                        : has_even && !has_odd ? Parity::even
                        : !has_even && !has_odd ? Parity::even
                                                : Parity::none;
  std::string name = "poly:";
  for (std::size_t k = 0; k < c.size(); ++k) name += (k ? "," : "") + format_number(c[k]);

  auto coeffs = std::make_shared<const std::vector<double>>(c);
  auto f = [coeffs](double x) {
    double acc = 0.0;
    for (auto it = coeffs->rbegin(); it != coeffs->rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  auto df = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs->size() - 1; k >= 1; --k) acc = acc * x + k * (*coeffs)[k];
    return acc;
  };
  TestFunction out(f, df, parity, name);
  out.coefficients_ = std::move(c);
  return out;
}

TestFunction TestFunction::exponential(double a) {
  return TestFunction([a](double x) { return std::exp(a * x); },
                      [a](double x) { return a * std::exp(a * x); },
                      a == 0.0 ? Parity::even : Parity::none, "exp:a=" + format_number(a));
}

TestFunction TestFunction::sine(double a) {
  return TestFunction([a](double x) { return std::sin(a * x); },
                      [a](double x) { return a * std::cos(a * x); }, Parity::odd,
                      "sin:a=" + format_number(a));
}

TestFunction TestFunction::cosine(double a) {
  return TestFunction([a](double x) { return std::cos(a * x); },
                      [a](double x) { return -a * std::sin(a * x); }, Parity::even,
                      "cos:a=" + format_number(a));
}

TestFunction TestFunction::bump(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("bump width s must be positive");
  const double inv = 1.0 / (2.0 * s * s);
  return TestFunction([inv](double x) { return std::exp(-inv * x * x); },
                      [inv](double x) { return -2.0 * inv * x * std::exp(-inv * x * x); },
                      Parity::even, "bump:s=" + format_number(s));
}

TestFunction TestFunction::combine(double a, const TestFunction& phi1, double b,
                                   const TestFunction& phi2) {
  const Parity parity = phi1.parity() == phi2.parity() ? phi1.parity() : Parity::none;
  Fn f1 = phi1.f_, f2 = phi2.f_, d1 = phi1.df_, d2 = phi2.df_;
  TestFunction out([=](double x) { return a * f1(x) + b * f2(x); },
                      [=](double x) { return a * d1(x) + b * d2(x); }, parity,
                      format_number(a) + "*(" + phi1.name() + ")+" + format_number(b) + "*(" +
                          phi2.name() + ")");
  if (phi1.coefficients_ && phi2.coefficients_) {
    std::vector<double> c(std::max(phi1.coefficients_->size(), phi2.coefficients_->size()), 0.0);
    for (std::size_t k = 0; k < phi1.coefficients_->size(); ++k) c[k] += a * (*phi1.coefficients_)[k];
    for (std::size_t k = 0; k < phi2.coefficients_->size(); ++k) c[k] += b * (*phi2.coefficients_)[k];
    out.coefficients_ = std::move(c);
  }
  return out;
}

TestFunction parse_test_function(std::string_view spec) {
  const auto tokens = detail::tokenize_spec(spec);
  const std::string context = "test function '" + std::string(spec) + "'";
  auto single = [&](const char* key) {
    if (!tokens.positional.empty() || tokens.named.size() != 1 || !tokens.named.count(key))
      throw ConfigError(std::string(tokens.head) + " needs exactly '" + key + "=' in " + context);
    return detail::parse_double(tokens.named.at(key), context);
  };
  try {
    if (tokens.head == "poly") {
      if (!tokens.named.empty() || tokens.positional.empty())
        throw ConfigError("poly needs a coefficient list in " + context);
      std::vector<double> c;
      for (const auto& t : tokens.positional) c.push_back(detail::parse_double(t, context));
      return TestFunction::polynomial(std::move(c));
    }
    if (tokens.head == "exp") return TestFunction::exponential(single("a"));
    if (tokens.head == "sin") return TestFunction::sine(single("a"));
    if (tokens.head == "cos") return TestFunction::cosine(single("a"));
    if (tokens.head == "bump") return TestFunction::bump(single("s"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(e.what()) + " in " + context);
  }
  throw ConfigError("unknown test function '" + tokens.head + "'");
}

}  // namespace wigstat
