#include "wigstat/spec_parsing.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "wigstat/entry_law.hpp"
#include "wigstat/errors.hpp"

namespace wigstat {

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw NumericalError("cannot format number");
  return std::string(buf, ptr);
}

namespace detail {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

SpecTokens tokenize_spec(std::string_view spec) {
  SpecTokens out;
  const std::string text = trim(spec);
  const auto colon = text.find(':');
  out.head = trim(std::string_view(text).substr(0, colon));
  if (out.head.empty()) throw ConfigError("empty spec '" + text + "'");
  if (colon == std::string::npos) return out;

  std::string_view rest = std::string_view(text).substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    if (item.empty()) throw ConfigError("empty field in spec '" + text + "'");
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      out.positional.push_back(item);
    } else {
      const std::string key = trim(std::string_view(item).substr(0, eq));
      const std::string value = trim(std::string_view(item).substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError("malformed field '" + item + "' in spec '" + text + "'");
      if (!out.named.emplace(key, value).second)
        throw ConfigError("duplicate key '" + key + "' in spec '" + text + "'");
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
    if (rest.empty()) throw ConfigError("trailing comma in spec '" + text + "'");
  }
  return out;
}

double parse_double(std::string_view token, std::string_view context) {
  const std::string t = trim(token);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value))
    throw ConfigError("invalid number '" + t + "' in " + std::string(context));
  return value;
}

long long parse_integer(std::string_view token, std::string_view context) {
  const std::string t = trim(token);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError("invalid integer '" + t + "' in " + std::string(context));
  return value;
}

}  // namespace detail
}  // namespace wigstat
