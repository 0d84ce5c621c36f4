#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace deadlisten::miner {

// Longest path the miner emits. Longer paths are dropped and counted.
inline constexpr std::size_t kMaxPathLength = 16;

// Listener registration methods of the Node.js EventEmitter API.
inline constexpr std::string_view kRegistrationMethods[] = {
    "on", "once", "addListener", "prependOnceListener", "prependListener"};

bool is_registration_method(std::string_view name);

struct PropertyRead {
  std::string name;
  friend auto operator<=>(const PropertyRead&, const PropertyRead&) = default;
};

struct CallReturn {
  friend auto operator<=>(const CallReturn&, const CallReturn&) = default;
};

struct Argument {
  std::uint32_t index = 0;
  friend auto operator<=>(const Argument&, const Argument&) = default;
};

struct Instance {
  friend auto operator<=>(const Instance&, const Instance&) = default;
};

using PathStep = std::variant<PropertyRead, CallReturn, Argument, Instance>;

// A symbolic API endpoint: a package import followed by property reads,
// call results, argument positions and instantiations.
struct AccessPath {
  std::string root_package;
  std::vector<PathStep> steps;

  AccessPath() = default;
  explicit AccessPath(std::string package, std::vector<PathStep> path_steps = {})
      : root_package(std::move(package)), steps(std::move(path_steps)) {}

  std::size_t length() const { return steps.size(); }

  AccessPath with(PathStep step) const {
    AccessPath out = *this;
    out.steps.push_back(std::move(step));
    return out;
  }
  AccessPath property(std::string name) const { return with(PropertyRead{std::move(name)}); }
  AccessPath call() const { return with(CallReturn{}); }
  AccessPath argument(std::uint32_t index) const { return with(Argument{index}); }
  AccessPath instance() const { return with(Instance{}); }

  friend bool operator==(const AccessPath&, const AccessPath&) = default;
  friend auto operator<=>(const AccessPath&, const AccessPath&) = default;
};

// Removes every `.m()` pair where m is a registration method: those methods
// return their receiver, so the pair aliases the receiver itself. Applied
// until no such pair remains; idempotent.
AccessPath rewrite_chained_aliases(const AccessPath& path);

// True when the package specifier is non-empty, non-relative and can be
// written inside `require(...)` without ambiguity.
bool is_valid_package(std::string_view package);

// JavaScript IdentifierName (ASCII letters, digits, `_`, `$`, plus any
// non-ASCII UTF-8 byte), not starting with a digit.
bool is_identifier_name(std::string_view name);

// Grammar check: valid root package and well-formed steps.
bool is_well_formed(const AccessPath& path);

}  // namespace deadlisten::miner
