#include "deadlisten/classifier/config.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "deadlisten/error.hpp"

namespace deadlisten::classifier {

void Config::validate() const {
  auto check = [](const char* name, double v) {
    if (!(v > 0.0 && v <= 1.0)) throw DomainError(fmt::format("{} must be in (0,1], got {}", name, v));
  };
  check("p_a", p_a);
  check("p_e", p_e);
  check("p_ca", p_ca);
  check("p_ce", p_ce);
}

Config parse_config(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view field = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw DomainError(fmt::format("malformed threshold '{}' in config '{}'", field, text));
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != 4) {
    throw DomainError(fmt::format("config needs 4 values p_a,p_e,p_ca,p_ce, got '{}'", text));
  }
  Config c{values[0], values[1], values[2], values[3]};
  c.validate();
  return c;
}

std::string to_string(const Config& c) {
  return fmt::format("({}, {}, {}, {})", c.p_a, c.p_e, c.p_ca, c.p_ce);
}

std::string to_csv_field(const Config& c) {
  return fmt::format("{},{},{},{}", c.p_a, c.p_e, c.p_ca, c.p_ce);
}

}  // namespace deadlisten::classifier
