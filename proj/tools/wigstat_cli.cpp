// wigstat: Monte-Carlo and closed-form limits for Tr phi(M) A of Wigner matrices.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wigstat/config.hpp"
#include "wigstat/errors.hpp"
#include "wigstat/report_io.hpp"

namespace fs = std::filesystem;
using namespace wigstat;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string run_file;
  std::string limit_file;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig c = o.config.empty() ? parse_config("") : load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  return c;
}

std::string output_path(const Options& o, const char* name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

int cmd_limit(const Options& o) {
  const ExperimentConfig c = load(o);
  const LimitLaw limit = c.limit_law();
  const EntryLaw law = c.entry_law();
  const Json j = limit_to_json(limit, c.limit_label(), law, c.x_grid.points());
  write_text_file(output_path(o, "limit.json"), j.dump(2) + "\n");
  std::printf("v_w = %.12g  (v_goe %.12g, c_k3 %.6g, c_k4 %.6g)\n", limit.v_w, limit.v_goe,
              limit.c_k3, limit.c_k4);
  if (limit.w2_corr) std::printf("w2_corr = %.12g\n", *limit.w2_corr);
  std::printf("c_phi = %.12g, tail bound at |x| = %g: %.3g\n", limit.c_phi,
              j["tail_bound_x"].get<double>(), j["tail_bound"].get<double>());
  if (limit.functionals.flagged)
    std::fprintf(stderr, "warning: probe functionals are %s, not exact limits\n",
                 to_string(limit.functionals.provenance));
  return 0;
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig c = load(o);
  const McRun run = wigstat::run(c.mc_config(o.threads));
  write_text_file(output_path(o, "samples.csv"), samples_csv(run.samples));
  write_text_file(output_path(o, "summary.json"), summary_to_json(run.summary).dump(2) + "\n");
  const KStatistics& k = run.summary.stats;
  std::printf("reps %d, n %d: mean %.6g  k2 %.6g (se %.3g)  k3 %.6g (se %.3g)  k4 %.6g (se %.3g)\n",
              run.summary.reps, run.summary.n, k.mean, k.k2, k.se_k2, k.k3, k.se_k3, k.k4,
              k.se_k4);
  return 0;
}

int cmd_compare(const Options& o) {
  const McSummary summary = summary_from_json(read_json_file(o.run_file));
  const StoredLimit stored = limit_from_json(read_json_file(o.limit_file));
  const EntryLaw law = parse_law(stored.label.law, stored.limit.max_order());
  const ComparisonReport report = compare(summary, stored.limit, law, stored.label);
  write_text_file(output_path(o, "report.json"), report_to_json(report).dump(2) + "\n");
  std::cout << report_table(report);
  return report.passed() ? 0 : kExitFailed;
}

int cmd_verify_transforms(const Options& o) {
  const ExperimentConfig c = load(o);
  const double w = std::sqrt(c.entry_law().w2());
  const TransformReport report =
      verify_transforms(c.step, c.horizon, w, c.t2_values, c.transform_tolerance, c.quadrature_order);
  write_text_file(output_path(o, "transforms.json"), transforms_to_json(report).dump(2) + "\n");
  std::printf("F1 %.3e  F2 max %.3e  F3 max %.3e\n", report.lemma.f1,
              report.lemma.f2.empty() ? 0.0 : *std::max_element(report.lemma.f2.begin(), report.lemma.f2.end()),
              report.lemma.f3.empty() ? 0.0 : *std::max_element(report.lemma.f3.begin(), report.lemma.f3.end()));
  std::printf("v*v %.3e  v*tv %.3e  v*v*v %.3e\n", report.convolutions.vv, report.convolutions.vtv,
              report.convolutions.vvv);
  std::printf("stieltjes residual %.3e  v(1) error %.3e\n", report.stieltjes_residual,
              report.v1_bessel_error);
  std::printf("%s\n", report.passed() ? "pass" : "FAIL");
  return report.passed() ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner matrix statistics: limits, simulation, comparison"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
  };
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config file");
    sub->add_option("--seed", o.seed, "override mc.seed");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* limit = app.add_subcommand("limit", "closed-form limit law as limit.json");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo samples.csv and summary.json");
  auto* comp = app.add_subcommand("compare", "compare a summary against a limit");
  auto* verify = app.add_subcommand("verify-transforms", "Volterra and transform checks");
  for (auto* sub : {limit, simulate, verify}) {
    add_config(sub);
    add_common(sub);
  }
  add_common(comp);
  comp->add_option("--run", o.run_file, "summary.json from simulate")->required();
  comp->add_option("--limit", o.limit_file, "limit.json from limit")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (limit->parsed()) return cmd_limit(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (comp->parsed()) return cmd_compare(o);
    if (verify->parsed()) return cmd_verify_transforms(o);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
  return kExitConfig;
}
