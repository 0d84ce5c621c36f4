#pragma once

#include <string>
#include <vector>

#include "deadlisten/miner/def_use.hpp"
#include "deadlisten/miner/syntax.hpp"

namespace deadlisten::miner {

// A call `receiver.m('event', callback)` with m a registration method, a
// constant event name and a function-valued callback.
struct Registration {
  NodeId call = kNoNode;
  NodeId receiver = kNoNode;
  NodeId callback = kNoNode;
  std::string method;
  std::string event;
  SourceLocation location;  // of the method name
};

// Registrations in source order.
std::vector<Registration> extract_registrations(const DefUseAnalysis& analysis);
std::vector<Registration> extract_registrations(const SyntaxTree& tree);

}  // namespace deadlisten::miner
