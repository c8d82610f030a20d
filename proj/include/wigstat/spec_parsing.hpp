#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wigstat::detail {

// `head:key=value,key=value` or `head:v1,v2,...`.
struct SpecTokens {
  std::string head;
  std::map<std::string, std::string> named;
  std::vector<std::string> positional;
};

SpecTokens tokenize_spec(std::string_view spec);
double parse_double(std::string_view token, std::string_view context);
long long parse_integer(std::string_view token, std::string_view context);
std::string trim(std::string_view s);

}  // namespace wigstat::detail
