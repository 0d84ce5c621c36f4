#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace deadlisten::classifier {

// Rarity thresholds p_a, p_e and confidence thresholds p_ca, p_ce.
struct Config {
  double p_a = 0.1;
  double p_e = 0.1;
  double p_ca = 0.03;
  double p_ce = 0.01;

  // Throws DomainError unless every value is in (0, 1].
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config&, const Config&) = default;
};

// "p_a,p_e,p_ca,p_ce". Throws DomainError on malformed or invalid input.
Config parse_config(std::string_view text);

// Shortest round-trip decimal form, e.g. "(0.1, 0.1, 0.03, 0.01)".
std::string to_string(const Config& config);
// "0.1,0.1,0.03,0.01"
std::string to_csv_field(const Config& config);

}  // namespace deadlisten::classifier
