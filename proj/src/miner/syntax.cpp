#include "deadlisten/miner/syntax.hpp"

namespace deadlisten::miner {

ParseError::ParseError(std::string file, std::uint32_t line, std::uint32_t column, std::string message)
    : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column),
      message_(std::move(message)) {}

bool SyntaxTree::empty() const { return root_ == kNoNode || nodes_.at(root_).children.empty(); }

NodeId SyntaxTree::child(NodeId id, std::size_t index) const {
  const auto& kids = nodes_.at(id).children;
  return index < kids.size() ? kids[index] : kNoNode;
}

SourceLocation SyntaxTree::location(NodeId id) const {
  const SyntaxNode& n = nodes_.at(id);
  return {file_, n.line, n.column};
}

NodeId SyntaxTree::add(SyntaxNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

std::vector<NodeId> SyntaxTree::preorder() const {
  std::vector<NodeId> out;
  if (root_ == kNoNode) return out;
  out.reserve(nodes_.size());
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    out.push_back(id);
    const auto& kids = nodes_[id].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      if (*it != kNoNode) stack.push_back(*it);
    }
  }
  return out;
}

bool is_require_call(const SyntaxTree& tree, NodeId id) {
  const SyntaxNode& n = tree.node(id);
  if (n.kind != NodeKind::CallExpression || n.children.size() != 2) return false;
  const SyntaxNode& callee = tree.node(n.children[0]);
  const SyntaxNode& arg = tree.node(n.children[1]);
  bool constant = arg.kind == NodeKind::StringLiteral ||
                  (arg.kind == NodeKind::TemplateLiteral && !arg.has(node_flags::kSubstitutions));
  return callee.kind == NodeKind::Identifier && callee.text == "require" && constant;
}

bool is_function_literal(NodeKind kind) {
  return kind == NodeKind::FunctionExpression || kind == NodeKind::ArrowFunction ||
         kind == NodeKind::FunctionDeclaration;
}

SyntaxCategory SyntaxTree::category(NodeId id) const {
  const SyntaxNode& n = nodes_.at(id);
  switch (n.kind) {
    case NodeKind::CallExpression:
      return is_require_call(*this, id) ? SyntaxCategory::ImportCall : SyntaxCategory::Call;
    case NodeKind::ImportDeclaration:
    case NodeKind::ImportExpression:
      return SyntaxCategory::ImportCall;
    case NodeKind::Identifier:
      return SyntaxCategory::Identifier;
    case NodeKind::MemberExpression:
    case NodeKind::ComputedMemberExpression:
      return SyntaxCategory::MemberAccess;
    case NodeKind::NewExpression:
      return SyntaxCategory::Instantiation;
    case NodeKind::FunctionExpression:
    case NodeKind::ArrowFunction:
    case NodeKind::FunctionDeclaration:
      return SyntaxCategory::FunctionLiteral;
    case NodeKind::StringLiteral:
      return SyntaxCategory::StringLiteral;
    case NodeKind::TemplateLiteral:
      return n.has(node_flags::kSubstitutions) ? SyntaxCategory::Other : SyntaxCategory::StringLiteral;
    case NodeKind::AssignmentExpression:
    case NodeKind::VariableDeclarator:
      return SyntaxCategory::Assignment;
    default:
      return SyntaxCategory::Other;
  }
}

}  // namespace deadlisten::miner
