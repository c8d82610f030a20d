#include "wigstat/probe.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wigstat/entry_law.hpp"
#include "wigstat/errors.hpp"
#include "wigstat/spec_parsing.hpp"

namespace wigstat {
namespace {

double power_sum(const Eigen::VectorXd& v, int p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(v(i), p);
  return acc;
}

// A_p given the off-diagonal and diagonal sums of C^p, already multiplied by
// n^{-p/2}.
double cumulant_weight(double full_sum, double diag_sum, int p, double diag_multiplier) {
  return 0.5 * (full_sum - diag_sum) + std::pow(std::sqrt(diag_multiplier) / 2.0, p) * diag_sum;
}

ProbeFunctionals dense_functionals(const Eigen::MatrixXd& a, int max_order,
                                   double diag_multiplier) {
  const double n = static_cast<double>(a.rows());
  const Eigen::MatrixXd c = a + a.transpose();
  ProbeFunctionals f;
  f.diag_multiplier = diag_multiplier;
  f.norm = a.squaredNorm() / n;
  f.t_a = a.trace() / n;
  f.t_ac = (a.array() * c.transpose().array()).sum() / n;
  const Eigen::VectorXd row_sums_c = c.rowwise().sum();
  f.k1 = a.diagonal().dot(row_sums_c) / std::pow(n, 1.5);
  f.kprime2 = a.sum() / std::pow(n, 1.5);
  f.k2 = f.t_a * c.sum() / std::pow(n, 1.5);
  f.k3 = (a.diagonal().array() * (a.diagonal().array() - f.t_a)).sum() / n;
  for (int p = 3; p <= max_order; ++p) {
    const double scale = std::pow(n, -0.5 * p);
    const double full = c.array().pow(p).sum() * scale;
    const double diag = c.diagonal().array().pow(p).sum() * scale;
    f.a_p.push_back(cumulant_weight(full, diag, p, diag_multiplier));
  }
  return f;
}

ProbeFunctionals bilinear_functionals(const Eigen::VectorXd& eta, int max_order,
                                      double diag_multiplier) {
  const double n = static_cast<double>(eta.size());
  const double s1 = eta.sum();
  const double s2 = eta.squaredNorm();
  const double s3 = power_sum(eta, 3);
  const double s4 = power_sum(eta, 4);
  ProbeFunctionals f;
  f.diag_multiplier = diag_multiplier;
  f.norm = s2 * s2;
  f.t_a = s2 / std::sqrt(n);
  f.t_ac = 2.0 * s2 * s2;
  f.k1 = 2.0 * s1 * s3 / std::sqrt(n);
  f.kprime2 = s1 * s1 / n;
  f.k2 = 2.0 * f.t_a * f.kprime2;
  f.k3 = s4 - s2 * s2 / n;
  for (int p = 3; p <= max_order; ++p) {
    const double sp = power_sum(eta, p);
    const double s2p = power_sum(eta, 2 * p);
    // sum_{l,m} C^p n^{-p/2} = 2^p sp^2, sum_m C_mm^p n^{-p/2} = 2^p s2p.
    const double two_p = std::pow(2.0, p);
    f.a_p.push_back(cumulant_weight(two_p * sp * sp, two_p * s2p, p, diag_multiplier));
  }
  return f;
}

void check_order(int max_order) {
  if (max_order < 3) throw std::invalid_argument("cumulant order must be at least 3");
}

double max_gap(const ProbeFunctionals& x, const ProbeFunctionals& y) {
  double g = 0.0;
  auto upd = [&](double a, double b) { g = std::max(g, std::abs(a - b)); };
  upd(x.norm, y.norm);
  upd(x.t_a, y.t_a);
  upd(x.t_ac, y.t_ac);
  upd(x.k1, y.k1);
  upd(x.k2, y.k2);
  upd(x.k3, y.k3);
  upd(x.kprime2, y.kprime2);
  for (std::size_t i = 0; i < x.a_p.size(); ++i) upd(x.a_p[i], y.a_p[i]);
  return g;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::extrapolated: return "extrapolated";
    case Provenance::finite: return "finite";
  }
  return "?";
}

Probe Probe::identity() {
  Probe p;
  p.family_ = ProbeFamily::identity;
  p.spec_ = "identity";
  return p;
}

Probe Probe::matrix_element(int j) {
  if (j < 1) throw std::invalid_argument("matrix element index must be >= 1");
  Probe p;
  p.family_ = ProbeFamily::matrix_element;
  p.element_ = j;
  p.spec_ = "elem:j=" + std::to_string(j);
  return p;
}

Probe Probe::delocalized_bilinear() {
  Probe p;
  p.family_ = ProbeFamily::bilinear;
  p.rule_ = BilinearRule::delocalized;
  p.spec_ = "bilinear:delocalized";
  return p;
}

Probe Probe::spiked_bilinear(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("spike weight a must lie in [0, 1]");
  Probe p;
  p.family_ = ProbeFamily::bilinear;
  p.rule_ = BilinearRule::spiked;
  p.spike_ = a;
  p.spec_ = "bilinear:spiked,a=" + format_number(a);
  return p;
}

Probe Probe::custom(Generator generator, std::string name) {
  Probe p;
  p.family_ = ProbeFamily::custom;
  p.generator_ = std::move(generator);
  p.spec_ = std::move(name);
  return p;
}

Probe Probe::fixed_matrix(Eigen::MatrixXd a, std::string name) {
  if (a.rows() != a.cols() || a.rows() < 2)
    throw std::invalid_argument("custom probe matrix must be square with n >= 2");
  const int n = static_cast<int>(a.rows());
  auto shared = std::make_shared<const Eigen::MatrixXd>(std::move(a));
  Probe p = custom([shared](int) { return *shared; }, std::move(name));
  p.fixed_n_ = n;
  return p;
}

std::optional<int> Probe::fixed_dimension() const { return fixed_n_; }

void Probe::check_dimension(int n) const {
  if (n < 2) throw std::invalid_argument("probe dimension must be at least 2");
  if (family_ == ProbeFamily::matrix_element && element_ > n)
    throw std::invalid_argument("matrix element index " + std::to_string(element_) +
                                " exceeds dimension " + std::to_string(n));
  if (fixed_n_ && *fixed_n_ != n)
    throw std::invalid_argument("custom probe '" + spec_ + "' exists only at n = " +
                                std::to_string(*fixed_n_));
}

Eigen::VectorXd Probe::bilinear_vector(int n) const {
  check_dimension(n);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  switch (family_) {
    case ProbeFamily::matrix_element:
      eta(element_ - 1) = 1.0;
      return eta;
    case ProbeFamily::bilinear:
      if (rule_ == BilinearRule::delocalized) {
        eta.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
      } else {
        const double b = std::sqrt((1.0 - spike_ * spike_) / (n - 1));
        eta.setConstant(b);
        eta(0) = spike_;
      }
      return eta;
    default:
      throw std::invalid_argument("probe '" + spec_ + "' has no bilinear vector");
  }
}

Eigen::MatrixXd Probe::dense(int n) const {
  check_dimension(n);
  switch (family_) {
    case ProbeFamily::identity:
      return Eigen::MatrixXd::Identity(n, n);
    case ProbeFamily::matrix_element:
    case ProbeFamily::bilinear: {
      const Eigen::VectorXd eta = bilinear_vector(n);
      return std::sqrt(static_cast<double>(n)) * eta * eta.transpose();
    }
    case ProbeFamily::custom: {
      Eigen::MatrixXd a = generator_(n);
      if (a.rows() != n || a.cols() != n)
        throw std::invalid_argument("custom probe '" + spec_ + "' returned a matrix of the wrong size");
      return a;
    }
  }
  return {};
}

ProbeFunctionals finite_functionals(const Probe& probe, int n, int max_order,
                                    double diag_multiplier) {
  check_order(max_order);
  probe.check_dimension(n);
  const double nd = static_cast<double>(n);
  switch (probe.family()) {
    case ProbeFamily::identity: {
      ProbeFunctionals f;
      f.diag_multiplier = diag_multiplier;
      f.norm = 1.0;
      f.t_a = 1.0;
      f.t_ac = 2.0;
      f.k1 = 2.0 / std::sqrt(nd);
      f.kprime2 = 1.0 / std::sqrt(nd);
      f.k2 = 2.0 * f.t_a * f.kprime2;
      f.k3 = 0.0;
      for (int p = 3; p <= max_order; ++p)
        f.a_p.push_back(std::pow(nd, 1.0 - 0.5 * p) * std::pow(diag_multiplier, 0.5 * p));
      return f;
    }
    case ProbeFamily::matrix_element: {
      ProbeFunctionals f;
      f.diag_multiplier = diag_multiplier;
      f.norm = 1.0;
      f.t_a = 1.0 / std::sqrt(nd);
      f.t_ac = 2.0;
      f.k1 = 2.0 / std::sqrt(nd);
      f.kprime2 = 1.0 / nd;
      f.k2 = 2.0 * f.t_a * f.kprime2;
      f.k3 = (nd - 1.0) / nd;
      for (int p = 3; p <= max_order; ++p) f.a_p.push_back(std::pow(diag_multiplier, 0.5 * p));
      return f;
    }
    case ProbeFamily::bilinear:
      return bilinear_functionals(probe.bilinear_vector(n), max_order, diag_multiplier);
    case ProbeFamily::custom:
      return dense_functionals(probe.dense(n), max_order, diag_multiplier);
  }
  return {};
}

ProbeFunctionals limit_functionals(const Probe& probe, int max_order, double diag_multiplier,
                                   int base_n, double gap_tolerance) {
  check_order(max_order);
  ProbeFunctionals f;
  f.diag_multiplier = diag_multiplier;
  f.norm = 1.0;
  f.t_ac = 2.0;
  f.a_p.assign(static_cast<std::size_t>(max_order - 2), 0.0);
  switch (probe.family()) {
    case ProbeFamily::identity:
      f.t_a = 1.0;
      f.atoms.emplace();
      return f;
    case ProbeFamily::matrix_element:
      f.k3 = 1.0;
      f.atoms = std::vector<double>{std::sqrt(diag_multiplier)};
      for (int p = 3; p <= max_order; ++p) f.a_p[p - 3] = std::pow(diag_multiplier, 0.5 * p);
      return f;
    case ProbeFamily::bilinear:
      if (probe.bilinear_rule() == BilinearRule::delocalized) {
        f.kprime2 = 1.0;
        f.atoms.emplace();
      } else {
        const double a = probe.spike();
        f.k1 = 2.0 * a * a * a * std::sqrt(1.0 - a * a);
        f.k3 = std::pow(a, 4);
        f.kprime2 = 1.0 - a * a;
        f.atoms = std::vector<double>{std::sqrt(diag_multiplier) * a * a};
        for (int p = 3; p <= max_order; ++p)
          f.a_p[p - 3] = std::pow(diag_multiplier, 0.5 * p) * std::pow(a, 2 * p);
      }
      return f;
    case ProbeFamily::custom:
      break;
  }
  if (const auto fixed = probe.fixed_dimension()) {
    ProbeFunctionals g = finite_functionals(probe, *fixed, max_order, diag_multiplier);
    g.provenance = Provenance::finite;
    // No second dimension to compare against; provenance carries the caveat.
    g.cauchy_gap = 0.0;
    g.flagged = true;
    return g;
  }
  const ProbeFunctionals coarse = finite_functionals(probe, base_n, max_order, diag_multiplier);
  ProbeFunctionals fine = finite_functionals(probe, 2 * base_n, max_order, diag_multiplier);
  fine.provenance = Provenance::extrapolated;
  fine.cauchy_gap = max_gap(coarse, fine);
  fine.flagged = !(fine.cauchy_gap <= gap_tolerance);
  return fine;
}

Eigen::MatrixXd read_dense_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open probe file '" + path + "'");
  long long n = 0;
  if (!(in >> n) || n < 2 || n > 100000)
    throw ConfigError("probe file '" + path + "': first line must hold n >= 2");
  Eigen::MatrixXd a(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j)
      if (!(in >> a(i, j)) || !std::isfinite(a(i, j)))
        throw ConfigError("probe file '" + path + "': expected " + std::to_string(n * n) +
                          " finite entries");
  std::string extra;
  if (in >> extra) throw ConfigError("probe file '" + path + "': trailing data '" + extra + "'");
  return a;
}

Probe parse_probe(std::string_view spec) {
  const auto tokens = detail::tokenize_spec(spec);
  const std::string context = "probe spec '" + std::string(spec) + "'";
  auto reject_extra = [&](std::size_t positional, std::size_t named) {
    if (tokens.positional.size() > positional)
      throw ConfigError("unexpected token '" + tokens.positional.back() + "' in " + context);
    if (tokens.named.size() > named)
      throw ConfigError("unexpected key in " + context);
  };
  try {
    if (tokens.head == "identity") {
      reject_extra(0, 0);
      return Probe::identity();
    }
    if (tokens.head == "elem") {
      reject_extra(0, 1);
      const auto it = tokens.named.find("j");
      if (it == tokens.named.end()) throw ConfigError("elem probe requires j in " + context);
      return Probe::matrix_element(static_cast<int>(detail::parse_integer(it->second, context)));
    }
    if (tokens.head == "bilinear") {
      if (tokens.positional.size() != 1)
        throw ConfigError("bilinear probe needs a rule (delocalized|spiked) in " + context);
      const std::string& rule = tokens.positional.front();
      if (rule == "delocalized") {
        reject_extra(1, 0);
        return Probe::delocalized_bilinear();
      }
      if (rule == "spiked") {
        reject_extra(1, 1);
        const auto it = tokens.named.find("a");
        if (it == tokens.named.end()) throw ConfigError("spiked probe requires a in " + context);
        return Probe::spiked_bilinear(detail::parse_double(it->second, context));
      }
      throw ConfigError("unknown bilinear rule '" + rule + "' in " + context);
    }
    if (tokens.head == "custom") {
      reject_extra(0, 1);
      const auto it = tokens.named.find("file");
      if (it == tokens.named.end()) throw ConfigError("custom probe requires file in " + context);
      return Probe::fixed_matrix(read_dense_matrix(it->second), "custom:file=" + it->second);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(e.what()) + " in " + context);
  }
  throw ConfigError("unknown probe '" + tokens.head + "'");
}

}  // namespace wigstat
