#include "deadlisten/miner/registrations.hpp"

#include <algorithm>
#include <tuple>

namespace deadlisten::miner {

namespace {

bool constant_string(const SyntaxNode& n) {
  return n.kind == NodeKind::StringLiteral ||
         (n.kind == NodeKind::TemplateLiteral && !n.has(node_flags::kSubstitutions));
}

}  // namespace

std::vector<Registration> extract_registrations(const DefUseAnalysis& analysis) {
  const SyntaxTree& tree = analysis.tree();
  std::vector<Registration> out;
  if (tree.root() == kNoNode) return out;
  for (NodeId id : tree.preorder()) {
    if (tree.kind(id) != NodeKind::CallExpression) continue;
    auto children = tree.children(id);
    if (children.size() < 3) continue;
    const SyntaxNode& callee = tree.node(children[0]);
    if (callee.kind != NodeKind::MemberExpression || !is_registration_method(callee.text)) continue;
    const SyntaxNode& event = tree.node(children[1]);
    if (!constant_string(event)) continue;
    if (!analysis.is_function_valued(children[2])) continue;

    Registration r;
    r.call = id;
    r.receiver = callee.children[0];
    r.callback = children[2];
    r.method = callee.text;
    r.event = event.text;
    r.location = tree.location(callee.children[1]);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const Registration& a, const Registration& b) {
    return std::tie(a.location.line, a.location.column) < std::tie(b.location.line, b.location.column);
  });
  return out;
}

std::vector<Registration> extract_registrations(const SyntaxTree& tree) {
  DefUseAnalysis analysis(tree);
  return extract_registrations(analysis);
}

}  // namespace deadlisten::miner
