#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deadlisten/error.hpp"

namespace deadlisten::miner {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct SourceLocation {
  std::string file;
  std::uint32_t line = 0;    // 1-based
  std::uint32_t column = 0;  // 1-based, in bytes
};

class ParseError : public Error {
 public:
  ParseError(std::string file, std::uint32_t line, std::uint32_t column, std::string message);

  const std::string& file() const { return file_; }
  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  std::uint32_t line_;
  std::uint32_t column_;
  std::string message_;
};

// Child layout per kind is fixed; optional slots hold kNoNode.
//
//   Program, Block, SequenceExpression   children = items
//   VariableDeclaration       text = var|let|const; children = declarators
//   VariableDeclarator        [target, init?]
//   Function*, ArrowFunction  text = name; [name-id?, body, params...]
//   Class*                    [name-id?, superclass?, members...]
//   MethodDefinition          [key, function]
//   ClassField                [key, value?]
//   ImportDeclaration         text = module; children = ImportSpecifier
//   ImportSpecifier           text = imported name, "default" or "*"; [local]
//   MemberExpression          text = property name; [object, property-id]
//   ComputedMemberExpression  [object, property]
//   Call/NewExpression        [callee, args...]
//   AssignmentExpression      text = operator; [target, value]
//   Property                  [key, value] (flags: computed, shorthand, method)
//   PatternProperty           [key, value-pattern]
//   AssignmentPattern         [target, default]
//   ForIn/ForOf               [left, right, body]
//   For                       [init?, test?, update?, body]
//   CatchClause               [param?, body]
//   TemplateLiteral           text = cooked value; children = substitutions
enum class NodeKind : std::uint8_t {
  Program,
  // statements
  ExpressionStatement,
  VariableDeclaration,
  VariableDeclarator,
  FunctionDeclaration,
  ClassDeclaration,
  Block,
  Empty,
  If,
  For,
  ForIn,
  ForOf,
  While,
  DoWhile,
  Return,
  Throw,
  Break,
  Continue,
  Labeled,
  Try,
  CatchClause,
  Switch,
  SwitchCase,
  Debugger,
  With,
  ImportDeclaration,
  ImportSpecifier,
  ExportDeclaration,
  // class members
  MethodDefinition,
  ClassField,
  StaticBlock,
  // expressions
  Identifier,
  PrivateName,
  StringLiteral,
  TemplateLiteral,
  TaggedTemplate,
  NumberLiteral,
  RegExpLiteral,
  Literal,  // true, false, null
  This,
  Super,
  MetaProperty,
  ArrayExpression,
  ObjectExpression,
  Property,
  SpreadElement,
  FunctionExpression,
  ArrowFunction,
  ClassExpression,
  MemberExpression,
  ComputedMemberExpression,
  CallExpression,
  NewExpression,
  ImportExpression,
  AssignmentExpression,
  BinaryExpression,
  LogicalExpression,
  ConditionalExpression,
  UnaryExpression,
  UpdateExpression,
  SequenceExpression,
  AwaitExpression,
  YieldExpression,
  // binding patterns
  ObjectPattern,
  PatternProperty,
  ArrayPattern,
  AssignmentPattern,
  RestElement,
};

// Coarse classification of nodes used by the registration detector and
// reports.
enum class SyntaxCategory : std::uint8_t {
  ImportCall,
  Identifier,
  MemberAccess,
  Call,
  Instantiation,
  FunctionLiteral,
  StringLiteral,
  Assignment,
  Other,
};

namespace node_flags {
inline constexpr std::uint32_t kComputed = 1u << 0;
inline constexpr std::uint32_t kShorthand = 1u << 1;
inline constexpr std::uint32_t kMethod = 1u << 2;
inline constexpr std::uint32_t kAsync = 1u << 3;
inline constexpr std::uint32_t kGenerator = 1u << 4;
inline constexpr std::uint32_t kExpressionBody = 1u << 5;
inline constexpr std::uint32_t kStatic = 1u << 6;
inline constexpr std::uint32_t kOptional = 1u << 7;
inline constexpr std::uint32_t kPrefix = 1u << 8;
inline constexpr std::uint32_t kSubstitutions = 1u << 9;
inline constexpr std::uint32_t kGetter = 1u << 10;
inline constexpr std::uint32_t kSetter = 1u << 11;
}  // namespace node_flags

struct SyntaxNode {
  NodeKind kind = NodeKind::Program;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t flags = 0;
  std::string text;
  std::vector<NodeId> children;

  bool has(std::uint32_t flag) const { return (flags & flag) != 0; }
};

class SyntaxTree {
 public:
  SyntaxTree() = default;
  explicit SyntaxTree(std::string file) : file_(std::move(file)) {}

  const std::string& file() const { return file_; }
  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const;

  const SyntaxNode& node(NodeId id) const { return nodes_.at(id); }
  NodeKind kind(NodeId id) const { return nodes_.at(id).kind; }
  std::span<const NodeId> children(NodeId id) const { return nodes_.at(id).children; }
  // kNoNode when the slot does not exist.
  NodeId child(NodeId id, std::size_t index) const;
  SourceLocation location(NodeId id) const;

  SyntaxCategory category(NodeId id) const;

  // Node ids in pre-order.
  std::vector<NodeId> preorder() const;

  NodeId add(SyntaxNode node);
  SyntaxNode& mutable_node(NodeId id) { return nodes_.at(id); }
  void set_root(NodeId id) { root_ = id; }

 private:
  std::string file_;
  std::vector<SyntaxNode> nodes_;
  NodeId root_ = kNoNode;
};

// `require('m')` with a single constant string argument.
bool is_require_call(const SyntaxTree& tree, NodeId id);
bool is_function_literal(NodeKind kind);

// Parses one file. Throws ParseError on the first syntax error.
SyntaxTree parse_source(std::string_view text, std::string file_id);

}  // namespace deadlisten::miner
