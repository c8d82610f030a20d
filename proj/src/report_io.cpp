#include "wigstat/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wigstat/entry_law.hpp"
#include "wigstat/errors.hpp"
#include "wigstat/rng.hpp"

namespace wigstat {
namespace {

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("malformed value for key '") + key + "'");
  }
}

Json stats_to_json(const KStatistics& k) {
  return Json{{"count", k.count}, {"mean", k.mean},   {"k2", k.k2},       {"k3", k.k3},
              {"k4", k.k4},       {"se_mean", k.se_mean}, {"se_k2", k.se_k2}, {"se_k3", k.se_k3},
              {"se_k4", k.se_k4}};
}

KStatistics stats_from_json(const Json& j) {
  KStatistics k;
  k.count = get<std::size_t>(j, "count");
  k.mean = get<double>(j, "mean");
  k.k2 = get<double>(j, "k2");
  k.k3 = get<double>(j, "k3");
  k.k4 = get<double>(j, "k4");
  k.se_mean = get<double>(j, "se_mean");
  k.se_k2 = get<double>(j, "se_k2");
  k.se_k3 = get<double>(j, "se_k3");
  k.se_k4 = get<double>(j, "se_k4");
  return k;
}

Json lemma_to_json(const LemmaErrors& e) {
  Json f2 = Json::array(), f3 = Json::array();
  for (std::size_t i = 0; i < e.t2_values.size(); ++i) {
    f2.push_back({{"t2", e.t2_values[i]}, {"sup_error", e.f2[i]}});
    f3.push_back({{"t2", e.t2_values[i]}, {"sup_error", e.f3[i]}});
  }
  return Json{{"f1", e.f1}, {"f2", f2}, {"f3", f3}, {"f3_at_t2_zero", e.f3_at_zero}};
}

Json convolutions_to_json(const ConvolutionErrors& c) {
  return Json{{"v_v", c.vv}, {"v_tv", c.vtv}, {"v_v_v", c.vvv}};
}

// Errors at rounding level carry no convergence information.
Json ratio(double coarse, double fine) {
  if (coarse < 1e-12 || fine <= 0.0) return nullptr;
  return coarse / fine;
}

}  // namespace

void ensure_finite(const Json& value, const std::string& path) {
  if (value.is_number_float()) {
    if (!std::isfinite(value.get<double>()))
      throw NumericalError("non-finite number at " + path);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      ensure_finite(value[i], path + "[" + std::to_string(i) + "]");
  } else if (value.is_object()) {
    for (const auto& [key, item] : value.items()) ensure_finite(item, path + "." + key);
  }
}

Json limit_to_json(const LimitLaw& limit, const LimitLabel& label, const EntryLaw& law,
                   const std::vector<double>& x_grid) {
  double x_max = 0.0;
  for (double x : x_grid) x_max = std::max(x_max, std::abs(x));
  const LogCfValue edge = log_cf(x_max, limit, law);
  const ProbeFunctionals& f = limit.functionals;

  Json j{{"v_n", limit.v_n},       {"v_jj", limit.v_jj}, {"v_goe", limit.v_goe},
         {"c_k3", limit.c_k3},     {"c_k4", limit.c_k4}, {"v_w", limit.v_w},
         {"c_phi", limit.c_phi},   {"tail", limit.tail}, {"tail_bound", edge.tail_bound}};
  j["tail_bound_x"] = x_max;
  j["tail_bound_coefficients"] = limit.tail_bound_coefficients;
  j["w2_corr"] = limit.w2_corr ? Json(*limit.w2_corr) : Json(nullptr);
  j["metadata"] = {{"law", label.law},
                   {"probe", label.probe},
                   {"test_function", label.phi},
                   {"diag_multiplier", label.diag_multiplier}};
  Json functionals{{"norm", f.norm},       {"t_a", f.t_a},       {"t_ac", f.t_ac},
                   {"k1", f.k1},           {"k2", f.k2},         {"k3", f.k3},
                   {"kprime2", f.kprime2}, {"a_p", f.a_p},       {"diag_multiplier", f.diag_multiplier},
                   {"provenance", to_string(f.provenance)},      {"cauchy_gap", f.cauchy_gap},
                   {"flagged", f.flagged}};
  functionals["atoms"] = f.atoms ? Json(*f.atoms) : Json(nullptr);
  j["functionals"] = std::move(functionals);
  ensure_finite(j);
  return j;
}

StoredLimit limit_from_json(const Json& j) {
  StoredLimit s;
  LimitLaw& l = s.limit;
  l.v_n = get<double>(j, "v_n");
  l.v_jj = get<double>(j, "v_jj");
  l.v_goe = get<double>(j, "v_goe");
  l.c_k3 = get<double>(j, "c_k3");
  l.c_k4 = get<double>(j, "c_k4");
  l.v_w = get<double>(j, "v_w");
  l.c_phi = get<double>(j, "c_phi");
  l.tail = get<std::vector<double>>(j, "tail");
  l.tail_bound_coefficients = get<std::vector<double>>(j, "tail_bound_coefficients");
  if (j.contains("w2_corr") && !j["w2_corr"].is_null()) l.w2_corr = get<double>(j, "w2_corr");

  const Json meta = get<Json>(j, "metadata");
  s.label.law = get<std::string>(meta, "law");
  s.label.probe = get<std::string>(meta, "probe");
  s.label.phi = get<std::string>(meta, "test_function");
  s.label.diag_multiplier = get<double>(meta, "diag_multiplier");
  l.diag_multiplier = s.label.diag_multiplier;

  const Json f = get<Json>(j, "functionals");
  ProbeFunctionals& pf = l.functionals;
  pf.norm = get<double>(f, "norm");
  pf.t_a = get<double>(f, "t_a");
  pf.t_ac = get<double>(f, "t_ac");
  pf.k1 = get<double>(f, "k1");
  pf.k2 = get<double>(f, "k2");
  pf.k3 = get<double>(f, "k3");
  pf.kprime2 = get<double>(f, "kprime2");
  pf.a_p = get<std::vector<double>>(f, "a_p");
  pf.diag_multiplier = get<double>(f, "diag_multiplier");
  pf.cauchy_gap = get<double>(f, "cauchy_gap");
  pf.flagged = get<bool>(f, "flagged");
  const auto provenance = get<std::string>(f, "provenance");
  pf.provenance = provenance == "exact"          ? Provenance::exact
                  : provenance == "extrapolated" ? Provenance::extrapolated
                                                 : Provenance::finite;
  if (f.contains("atoms") && !f["atoms"].is_null()) pf.atoms = get<std::vector<double>>(f, "atoms");
  return s;
}

Json summary_to_json(const McSummary& s) {
  Json ecf_table = Json::array();
  for (std::size_t i = 0; i < s.x_grid.size(); ++i)
    ecf_table.push_back({{"x", s.x_grid[i]}, {"re", s.ecf[i].real()}, {"im", s.ecf[i].imag()}});
  Json sweep = Json::array();
  for (const auto& p : s.sweep) sweep.push_back({{"n", p.n}, {"stats", stats_to_json(p.stats)}});
  Json j{{"metadata",
          {{"ensemble", s.ensemble},
           {"law", s.law},
           {"probe", s.probe},
           {"test_function", s.phi},
           {"diag_multiplier", s.diag_multiplier},
           {"n", s.n},
           {"reps", s.reps},
           {"seed", s.seed}}},
         {"estimates", stats_to_json(s.stats)},
         {"ecf", ecf_table},
         {"sweep", sweep}};
  ensure_finite(j);
  return j;
}

McSummary summary_from_json(const Json& j) {
  McSummary s;
  const Json meta = get<Json>(j, "metadata");
  s.ensemble = get<std::string>(meta, "ensemble");
  s.law = get<std::string>(meta, "law");
  s.probe = get<std::string>(meta, "probe");
  s.phi = get<std::string>(meta, "test_function");
  s.diag_multiplier = get<double>(meta, "diag_multiplier");
  s.n = get<int>(meta, "n");
  s.reps = get<int>(meta, "reps");
  s.seed = get<std::uint64_t>(meta, "seed");
  s.stats = stats_from_json(get<Json>(j, "estimates"));
  for (const auto& row : get<Json>(j, "ecf")) {
    s.x_grid.push_back(get<double>(row, "x"));
    s.ecf.emplace_back(get<double>(row, "re"), get<double>(row, "im"));
  }
  for (const auto& row : get<Json>(j, "sweep"))
    s.sweep.push_back({get<int>(row, "n"), stats_from_json(get<Json>(row, "stats"))});
  return s;
}

std::string samples_csv(const std::vector<double>& samples) {
  std::string out = "replica,xi\n";
  char buffer[64];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(buffer, sizeof buffer, "%zu,%.17g\n", i, samples[i]);
    out += buffer;
  }
  return out;
}

Json report_to_json(const ComparisonReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"name", row.name},
                    {"estimate", row.estimate},
                    {"se", row.se},
                    {"theory", row.theory},
                    {"z", row.z},
                    {"source", row.source},
                    {"gated", row.gated},
                    {"pass", row.pass}});
  Json j{{"rows", rows},
         {"ecf",
          {{"sup_discrepancy", r.ecf_discrepancy},
           {"threshold", r.ecf_threshold},
           {"tail_bound", r.tail_bound},
           {"resummed", r.ecf_resummed},
           {"pass", r.ecf_pass}}},
         {"sweep_non_increasing", r.sweep_monotone},
         {"z_threshold", kZThreshold},
         {"pass", r.passed()}};
  ensure_finite(j);
  return j;
}

std::string report_table(const ComparisonReport& r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %14s %12s %14s %9s  %s\n", "quantity", "estimate", "se",
                "theory", "z", "result");
  out << line;
  for (const auto& row : r.rows) {
    const char* verdict = !row.gated ? "info" : row.pass ? "pass" : "FAIL";
    std::snprintf(line, sizeof line, "%-12s %14.6g %12.4g %14.6g %9.3f  %s\n", row.name.c_str(),
                  row.estimate, row.se, row.theory, row.z, verdict);
    out << line;
  }
  std::snprintf(line, sizeof line, "ecf sup discrepancy %.4g (threshold %.4g%s)  %s\n",
                r.ecf_discrepancy, r.ecf_threshold, r.ecf_resummed ? ", closed-form cf" : "",
                r.ecf_pass ? "pass" : "FAIL");
  out << line;
  if (!r.sweep_monotone) out << "note: |k2(n) - v_w| grows along the n-sweep\n";
  out << (r.passed() ? "overall: pass\n" : "overall: FAIL\n");
  return out.str();
}

bool TransformReport::passed() const {
  return lemma.max_error() <= tolerance && convolutions.max_error() <= tolerance &&
         stieltjes_residual <= 1e-12 && v1_bessel_error <= 1e-10;
}

TransformReport verify_transforms(double step, double horizon, double w,
                                  const std::vector<double>& t2_values, double tolerance,
                                  int quadrature_order) {
  TransformReport r;
  r.step = step;
  r.horizon = horizon;
  r.w = w;
  r.tolerance = tolerance;
  const TimeGrid grid(horizon, step);
  const TimeGrid half(horizon, 0.5 * step);
  r.lemma = verify_lemma1(grid, w, t2_values, quadrature_order);
  r.lemma_half = verify_lemma1(half, w, t2_values, quadrature_order);
  r.convolutions = verify_convolutions(grid, w, quadrature_order);
  r.convolutions_half = verify_convolutions(half, w, quadrature_order);

  Rng rng(0);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(0.5, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double y = im(rng) * ((i % 2) ? 1.0 : -1.0);
    const cplx z(re(rng), y);
    const cplx v = stieltjes_v(z, w);
    r.stieltjes_residual = std::max(r.stieltjes_residual, std::abs(w * w * v * v + z * v + 1.0));
  }
  r.v1_bessel_error = std::abs(v_of_t(1.0, w, quadrature_order) - std::cyl_bessel_j(1.0, 2.0 * w) / w);
  return r;
}

Json transforms_to_json(const TransformReport& r) {
  Json ratios{{"f1", ratio(r.lemma.f1, r.lemma_half.f1)},
              {"v_v", ratio(r.convolutions.vv, r.convolutions_half.vv)},
              {"v_tv", ratio(r.convolutions.vtv, r.convolutions_half.vtv)},
              {"v_v_v", ratio(r.convolutions.vvv, r.convolutions_half.vvv)}};
  Json f2 = Json::array(), f3 = Json::array();
  for (std::size_t i = 0; i < r.lemma.t2_values.size(); ++i) {
    f2.push_back({{"t2", r.lemma.t2_values[i]}, {"ratio", ratio(r.lemma.f2[i], r.lemma_half.f2[i])}});
    f3.push_back({{"t2", r.lemma.t2_values[i]}, {"ratio", ratio(r.lemma.f3[i], r.lemma_half.f3[i])}});
  }
  ratios["f2"] = f2;
  ratios["f3"] = f3;
  Json j{{"grid", {{"step", r.step}, {"horizon", r.horizon}, {"w", r.w}}},
         {"tolerance", r.tolerance},
         {"lemma", lemma_to_json(r.lemma)},
         {"convolutions", convolutions_to_json(r.convolutions)},
         {"half_step", {{"lemma", lemma_to_json(r.lemma_half)},
                        {"convolutions", convolutions_to_json(r.convolutions_half)}}},
         {"halving_ratios", ratios},
         {"stieltjes_max_residual", r.stieltjes_residual},
         {"v1_bessel_error", r.v1_bessel_error},
         {"pass", r.passed()}};
  ensure_finite(j);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wigstat
