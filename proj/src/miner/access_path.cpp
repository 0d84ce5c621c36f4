#include "deadlisten/miner/access_path.hpp"

#include <algorithm>

namespace deadlisten::miner {

bool is_registration_method(std::string_view name) {
  return std::ranges::find(kRegistrationMethods, name) != std::end(kRegistrationMethods);
}

AccessPath rewrite_chained_aliases(const AccessPath& path) {
  AccessPath out{path.root_package};
  out.steps.reserve(path.steps.size());
  for (const PathStep& step : path.steps) {
    if (std::holds_alternative<CallReturn>(step) && !out.steps.empty()) {
      const auto* read = std::get_if<PropertyRead>(&out.steps.back());
      if (read != nullptr && is_registration_method(read->name)) {
        out.steps.pop_back();
        continue;
      }
    }
    out.steps.push_back(step);
  }
  return out;
}

bool is_valid_package(std::string_view package) {
  if (package.empty() || package.front() == '.' || package.front() == '/') return false;
  return std::ranges::none_of(package, [](char c) {
    auto u = static_cast<unsigned char>(c);
    return c == '(' || c == ')' || u < 0x20 || u == 0x7f;
  });
}

bool is_identifier_name(std::string_view name) {
  if (name.empty()) return false;
  auto is_start = [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
  };
  if (!is_start(static_cast<unsigned char>(name.front()))) return false;
  return std::ranges::all_of(name, [&](char c) {
    auto u = static_cast<unsigned char>(c);
    return is_start(u) || (u >= '0' && u <= '9');
  });
}

bool is_well_formed(const AccessPath& path) {
  if (!is_valid_package(path.root_package)) return false;
  return std::ranges::all_of(path.steps, [](const PathStep& step) {
    const auto* read = std::get_if<PropertyRead>(&step);
    return read == nullptr || is_identifier_name(read->name);
  });
}

}  // namespace deadlisten::miner
