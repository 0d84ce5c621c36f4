#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deadlisten/miner/access_path.hpp"
#include "deadlisten/miner/syntax.hpp"

namespace deadlisten::miner {

using BindingId = std::uint32_t;

// One way a binding may receive its value. The analysis is flow-insensitive:
// every definition contributes candidates regardless of where it occurs.
struct Definition {
  enum class Kind : std::uint8_t {
    Value,      // `node` evaluated, then `properties` read (destructuring)
    Import,     // package `module`, then `properties` read
    Parameter,  // parameter `index` of function literal `node`
    Opaque,     // untraceable (array destructuring, loop variables, ...)
  };

  Kind kind = Kind::Opaque;
  NodeId node = kNoNode;
  std::string module;
  std::vector<std::string> properties;
  std::uint32_t index = 0;
};

struct Binding {
  std::string name;
  NodeId declaration = kNoNode;
  std::vector<Definition> definitions;
};

struct ResolutionCounters {
  std::uint64_t paths_too_long = 0;
  std::uint64_t candidates_truncated = 0;
};

// Context- and flow-insensitive def-use information for one file, plus
// access-path resolution over it. Identifiers are resolved lexically;
// assignments to undeclared names create implicit globals.
class DefUseAnalysis {
 public:
  // Resolution stops extending paths past this many steps; alias rewriting
  // may shorten a path afterwards, so this is larger than kMaxPathLength.
  static constexpr std::size_t kWorkingPathLimit = 2 * kMaxPathLength;
  static constexpr std::size_t kMaxCandidates = 64;

  explicit DefUseAnalysis(const SyntaxTree& tree);

  const SyntaxTree& tree() const { return *tree_; }

  // Binding an identifier node refers to or declares; nullopt for globals.
  std::optional<BindingId> binding_of(NodeId identifier) const;
  const Binding& binding(BindingId id) const { return bindings_.at(id); }
  std::size_t binding_count() const { return bindings_.size(); }

  // Function literals an expression may evaluate to (through aliases).
  std::vector<NodeId> function_values(NodeId expr) const;
  bool is_function_valued(NodeId expr) const { return !function_values(expr).empty(); }

  // Every access path `expr` may denote; empty when it cannot be traced to
  // a package import. Paths are returned as built, before alias rewriting.
  std::vector<AccessPath> resolve(NodeId expr);

  const ResolutionCounters& counters() const { return counters_; }

 private:
  struct CallSite {
    NodeId call;
    std::uint32_t argument;
  };

  void build();
  void collect_call_sites();
  void function_values_into(NodeId expr, std::vector<NodeId>& out, std::vector<bool>& seen) const;

  std::vector<AccessPath> resolve_expr(NodeId expr);
  std::vector<AccessPath> resolve_binding(BindingId id);
  std::vector<AccessPath> resolve_definition(const Definition& def);
  std::vector<AccessPath> function_paths(NodeId function);
  std::vector<AccessPath> argument_values(NodeId function, std::uint32_t index);
  void extend(std::vector<AccessPath>& out, const std::vector<AccessPath>& bases, const PathStep& step);
  void normalize(std::vector<AccessPath>& paths);

  const SyntaxTree* tree_;
  std::vector<Binding> bindings_;
  std::unordered_map<NodeId, BindingId> identifier_binding_;
  std::unordered_map<NodeId, std::vector<CallSite>> call_sites_;
  // direct calls of a local function literal
  std::unordered_map<NodeId, std::vector<NodeId>> invocations_;

  // resolution state
  std::vector<std::optional<std::vector<AccessPath>>> cache_;
  std::vector<std::vector<AccessPath>> partial_;
  std::vector<int> stack_depth_;
  int depth_ = 0;
  int low_ = 0;
  ResolutionCounters counters_;
};

// Strips the `node:` scheme of built-in module specifiers.
std::string normalize_module_specifier(std::string_view specifier);

}  // namespace deadlisten::miner
