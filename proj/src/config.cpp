#include "wigstat/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

#include "wigstat/entry_law.hpp"
#include "wigstat/errors.hpp"
#include "wigstat/spec_parsing.hpp"

namespace wigstat {
namespace {

using detail::parse_double;
using detail::parse_integer;
using detail::trim;

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    out.push_back(trim(text.substr(begin, end == std::string_view::npos ? end : end - begin)));
    if (end == std::string_view::npos) return out;
    begin = end + 1;
  }
}

std::uint64_t parse_seed(std::string_view token) {
  std::uint64_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty())
    throw ConfigError("mc.seed: not an unsigned 64-bit integer: '" + std::string(token) + "'");
  return value;
}

int parse_int(std::string_view token, std::string_view context) {
  const long long v = parse_integer(token, context);
  if (v < INT32_MIN || v > INT32_MAX)
    throw ConfigError(std::string(context) + ": integer out of range: '" + std::string(token) + "'");
  return static_cast<int>(v);
}

LinearGrid parse_grid(std::string_view token) {
  const auto parts = split(token, ':');
  if (parts.size() != 3)
    throw ConfigError("mc.x_grid: expected start:stop:count, got '" + std::string(token) + "'");
  LinearGrid g{parse_double(parts[0], "mc.x_grid"), parse_double(parts[1], "mc.x_grid"),
               parse_int(parts[2], "mc.x_grid")};
  if (g.count < 1) throw ConfigError("mc.x_grid: count must be positive");
  if (g.count == 1 && g.start != g.stop)
    throw ConfigError("mc.x_grid: a single point needs start == stop");
  return g;
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view token, Parse parse) {
  std::vector<T> out;
  if (trim(token).empty()) return out;
  for (const auto& part : split(token, ',')) out.push_back(parse(part));
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>)
      out += format_number(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

void check_positive(double value, const char* key) {
  if (!(value > 0.0)) throw ConfigError(std::string(key) + " must be positive");
}

}  // namespace

std::vector<double> LinearGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
  return out;
}

EntryLaw ExperimentConfig::entry_law() const { return parse_law(law, cumulant_order); }

Ensemble ExperimentConfig::ensemble() const {
  const EntryLaw l = entry_law();
  if (ensemble_kind == "goe") {
    Ensemble e = Ensemble::goe(l.w2(), cumulant_order);
    e.diag_multiplier = diag_multiplier;
    return e;
  }
  return Ensemble::wigner(l, diag_multiplier);
}

Probe ExperimentConfig::make_probe() const { return parse_probe(probe); }

TestFunction ExperimentConfig::phi() const { return parse_test_function(test_function); }

Quadratures ExperimentConfig::quadratures() const {
  return Quadratures::make(std::sqrt(entry_law().w2()), quadrature_order);
}

TimeGrid ExperimentConfig::time_grid() const { return TimeGrid(horizon, step); }

McConfig ExperimentConfig::mc_config(int threads) const {
  McConfig c;
  c.ensemble = ensemble();
  c.probe = make_probe();
  c.phi = phi();
  c.n = n;
  c.reps = reps;
  c.seed = seed;
  c.x_grid = x_grid.points();
  c.n_sweep = n_sweep;
  c.threads = threads;
  c.evaluation = evaluation == "spectral" ? Evaluation::spectral : Evaluation::automatic;
  return c;
}

LimitLaw ExperimentConfig::limit_law() const {
  const ProbeFunctionals f = limit_functionals(make_probe(), cumulant_order, diag_multiplier);
  return v_w(phi(), entry_law(), f, quadratures(), diag_multiplier);
}

LimitLabel ExperimentConfig::limit_label() const {
  return {law, probe, test_function, diag_multiplier};
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> keys{
      {"ensemble",
       {{"kind", [&](const std::string& v) { c.ensemble_kind = v; }},
        {"law", [&](const std::string& v) { c.law = v; }},
        {"diag_multiplier",
         [&](const std::string& v) { c.diag_multiplier = parse_double(v, "ensemble.diag_multiplier"); }}}},
      {"probe", {{"spec", [&](const std::string& v) { c.probe = v; }}}},
      {"test_function", {{"spec", [&](const std::string& v) { c.test_function = v; }}}},
      {"mc",
       {{"n", [&](const std::string& v) { c.n = parse_int(v, "mc.n"); }},
        {"reps", [&](const std::string& v) { c.reps = parse_int(v, "mc.reps"); }},
        {"seed", [&](const std::string& v) { c.seed = parse_seed(v); }},
        {"x_grid", [&](const std::string& v) { c.x_grid = parse_grid(v); }},
        {"evaluation", [&](const std::string& v) { c.evaluation = v; }},
        {"n_sweep", [&](const std::string& v) {
           c.n_sweep = parse_list<int>(v, [](const std::string& s) { return parse_int(s, "mc.n_sweep"); });
         }}}},
      {"limits",
       {{"quadrature_order",
         [&](const std::string& v) { c.quadrature_order = parse_int(v, "limits.quadrature_order"); }},
        {"cumulant_order",
         [&](const std::string& v) { c.cumulant_order = parse_int(v, "limits.cumulant_order"); }},
        {"tail_tolerance",
         [&](const std::string& v) { c.tail_tolerance = parse_double(v, "limits.tail_tolerance"); }}}},
      {"transforms",
       {{"step", [&](const std::string& v) { c.step = parse_double(v, "transforms.step"); }},
        {"horizon", [&](const std::string& v) { c.horizon = parse_double(v, "transforms.horizon"); }},
        {"t2_values", [&](const std::string& v) {
           c.t2_values = parse_list<double>(
               v, [](const std::string& s) { return parse_double(s, "transforms.t2_values"); });
         }},
        {"tolerance",
         [&](const std::string& v) { c.transform_tolerance = parse_double(v, "transforms.tolerance"); }}}},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = "line " + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": malformed section header '" + t + "'");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!keys.contains(section)) throw ConfigError(where + ": unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value, got '" + t + "'");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    const auto& section_keys = keys.at(section);
    const auto it = section_keys.find(key);
    if (it == section_keys.end())
      throw ConfigError(where + ": unknown key '" + key + "' in section [" + section + "]");
    if (seen[section + "." + key]++)
      throw ConfigError(where + ": duplicate key '" + section + "." + key + "'");
    it->second(value);
  }

  // Validate and canonicalize catalog names.
  if (c.ensemble_kind != "goe" && c.ensemble_kind != "wigner")
    throw ConfigError("ensemble.kind: unknown ensemble '" + c.ensemble_kind + "'");
  if (c.evaluation != "auto" && c.evaluation != "spectral")
    throw ConfigError("mc.evaluation: unknown evaluation '" + c.evaluation + "'");
  if (c.cumulant_order < 4 || c.cumulant_order > 16)
    throw ConfigError("limits.cumulant_order must lie in [4, 16]");
  if (c.quadrature_order < 8) throw ConfigError("limits.quadrature_order must be at least 8");
  check_positive(c.diag_multiplier, "ensemble.diag_multiplier");
  check_positive(c.tail_tolerance, "limits.tail_tolerance");
  check_positive(c.transform_tolerance, "transforms.tolerance");
  const EntryLaw l = c.entry_law();
  if (c.ensemble_kind == "goe" && l.kind() != SamplerKind::gaussian)
    throw ConfigError("ensemble.law: a goe ensemble needs a gaussian law, got '" + c.law + "'");
  c.law = l.spec();
  c.probe = c.make_probe().spec();
  c.test_function = c.phi().name();
  try {
    (void)c.time_grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("transforms: ") + e.what());
  }
  for (double t2 : c.t2_values)
    if (t2 < 0.0 || t2 > c.horizon) throw ConfigError("transforms.t2_values must lie in [0, horizon]");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[ensemble]\n"
      << "kind = " << c.ensemble_kind << "\n"
      << "law = " << c.law << "\n"
      << "diag_multiplier = " << format_number(c.diag_multiplier) << "\n\n"
      << "[probe]\nspec = " << c.probe << "\n\n"
      << "[test_function]\nspec = " << c.test_function << "\n\n"
      << "[mc]\n"
      << "n = " << c.n << "\n"
      << "reps = " << c.reps << "\n"
      << "seed = " << c.seed << "\n"
      << "x_grid = " << format_number(c.x_grid.start) << ':' << format_number(c.x_grid.stop) << ':'
      << c.x_grid.count << "\n"
      << "n_sweep = " << join(c.n_sweep) << "\n"
      << "evaluation = " << c.evaluation << "\n\n"
      << "[limits]\n"
      << "quadrature_order = " << c.quadrature_order << "\n"
      << "cumulant_order = " << c.cumulant_order << "\n"
      << "tail_tolerance = " << format_number(c.tail_tolerance) << "\n\n"
      << "[transforms]\n"
      << "step = " << format_number(c.step) << "\n"
      << "horizon = " << format_number(c.horizon) << "\n"
      << "t2_values = " << join(c.t2_values) << "\n"
      << "tolerance = " << format_number(c.transform_tolerance) << "\n";
  return out.str();
}

}  // namespace wigstat
