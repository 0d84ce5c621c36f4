// Recursive-descent parser for the JavaScript subset the miner needs:
// ES2017 statements and expressions plus a few later additions that are
// common in the wild (optional chaining, nullish coalescing, class fields).
// No early errors are reported; the goal is a faithful tree for def-use
// analysis, not validation.

#include <algorithm>
#include <array>
#include <optional>
#include <unordered_set>

#include "deadlisten/miner/syntax.hpp"
#include "lexer.hpp"

namespace deadlisten::miner {
namespace {

using detail::Lexer;
using detail::Token;
using detail::TokenType;
namespace nf = node_flags;

constexpr std::array<std::string_view, 37> kReserved = {
    "break",  "case",     "catch",   "class",  "const",      "continue", "debugger", "default",
    "delete", "do",       "else",    "export", "extends",    "finally",  "for",      "function",
    "if",     "import",   "in",      "instanceof", "new",    "return",   "super",    "switch",
    "this",   "throw",    "try",     "typeof", "var",        "void",     "while",    "with",
    "null",   "true",     "false",   "enum",   "implements"};

bool is_reserved(const Token& tok) {
  if (tok.type != TokenType::Identifier || tok.escaped) return false;
  for (auto word : kReserved) {
    if (tok.value == word) return true;
  }
  return false;
}

int binary_precedence(const Token& tok, bool allow_in) {
  if (tok.type == TokenType::Identifier && !tok.escaped) {
    if (tok.value == "instanceof") return 8;
    if (tok.value == "in") return allow_in ? 8 : 0;
    return 0;
  }
  if (tok.type != TokenType::Punctuator) return 0;
  const std::string& op = tok.value;
  if (op == "??") return 1;
  if (op == "||") return 2;
  if (op == "&&") return 3;
  if (op == "|") return 4;
  if (op == "^") return 5;
  if (op == "&") return 6;
  if (op == "==" || op == "!=" || op == "===" || op == "!==") return 7;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 8;
  if (op == "<<" || op == ">>" || op == ">>>") return 9;
  if (op == "+" || op == "-") return 10;
  if (op == "*" || op == "/" || op == "%") return 11;
  if (op == "**") return 12;
  return 0;
}

bool is_assignment_operator(const Token& tok) {
  if (tok.type != TokenType::Punctuator) return false;
  static const std::unordered_set<std::string> kOps = {
      "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "??="};
  return kOps.contains(tok.value);
}

class Parser {
 public:
  Parser(std::string_view source, std::string file) : lex_(source, file), tree_(std::move(file)) {
    advance();
  }

  SyntaxTree parse_program() {
    Token start = cur_;
    std::vector<NodeId> body;
    while (cur_.type != TokenType::EndOfFile) body.push_back(parse_statement());
    NodeId root = make(NodeKind::Program, start, std::move(body));
    tree_.set_root(root);
    return std::move(tree_);
  }

 private:
  // ---- token plumbing ----

  void advance() {
    prev_ = std::move(cur_);
    cur_ = lex_.next();
  }

  // Lookahead past cur_. Text after a template substitution's `}` is not
  // token-shaped, so a scan failure reads as end of input.
  Token peek(int distance = 1) {
    Lexer::State saved = lex_.save();
    Token tok;
    try {
      for (int i = 0; i < distance; ++i) tok = lex_.next();
    } catch (const ParseError&) {
      tok = Token{};
    }
    lex_.restore(saved);
    return tok;
  }

  bool at(std::string_view punct) const { return cur_.is(punct); }
  bool at_word(std::string_view word) const { return cur_.is_word(word); }

  bool eat(std::string_view punct) {
    if (!at(punct)) return false;
    advance();
    return true;
  }

  bool eat_word(std::string_view word) {
    if (!at_word(word)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    lex_.fail(cur_.line, cur_.column, message);
  }

  [[noreturn]] void unexpected() const {
    if (cur_.type == TokenType::EndOfFile) fail("unexpected end of input");
    fail("unexpected token '" + cur_.value + "'");
  }

  void expect(std::string_view punct) {
    if (!eat(punct)) fail("expected '" + std::string(punct) + "'");
  }

  void consume_semicolon() {
    if (eat(";")) return;
    if (at("}") || cur_.type == TokenType::EndOfFile || cur_.newline_before) return;
    unexpected();
  }

  bool can_start_expression(const Token& tok) const {
    if (tok.type == TokenType::EndOfFile) return false;
    if (tok.type != TokenType::Punctuator) return true;
    static const std::unordered_set<std::string> kStarters = {
        "(", "[", "{", "+", "-", "!", "~", "++", "--", "/", "/=", "..."};
    return kStarters.contains(tok.value);
  }

  // ---- node construction ----

  NodeId make(NodeKind kind, const Token& at_tok, std::vector<NodeId> children = {},
              std::string text = {}, std::uint32_t flags = 0) {
    SyntaxNode node;
    node.kind = kind;
    node.line = at_tok.line;
    node.column = at_tok.column;
    node.flags = flags;
    node.text = std::move(text);
    node.children = std::move(children);
    // Tree walks downstream are recursive; bound their depth here.
    std::uint32_t depth = 1;
    for (NodeId c : node.children) {
      if (c != kNoNode) depth = std::max<std::uint32_t>(depth, depth_[c] + 1u);
    }
    if (depth > kMaxTreeDepth) fail("nesting too deep");
    depth_.push_back(depth);
    return tree_.add(std::move(node));
  }

  struct NestingGuard {
    explicit NestingGuard(Parser& p) : parser(p) {
      if (++parser.nesting_ > kMaxNesting) parser.fail("nesting too deep");
    }
    ~NestingGuard() { --parser.nesting_; }
    NestingGuard(const NestingGuard&) = delete;
    NestingGuard& operator=(const NestingGuard&) = delete;
    Parser& parser;
  };

  SyntaxNode& node(NodeId id) { return tree_.mutable_node(id); }

  NodeId identifier_from(const Token& tok) {
    return make(NodeKind::Identifier, tok, {}, tok.value);
  }

  NodeId parse_binding_identifier() {
    if (cur_.type != TokenType::Identifier || is_reserved(cur_)) fail("expected identifier");
    Token tok = cur_;
    advance();
    return identifier_from(tok);
  }

  // ---- statements ----

  NodeId parse_statement() {
    NestingGuard guard(*this);
    Token start = cur_;
    if (cur_.type == TokenType::Punctuator) {
      if (at("{")) return parse_block();
      if (at(";")) {
        advance();
        return make(NodeKind::Empty, start);
      }
    }
    if (cur_.type == TokenType::Identifier && !cur_.escaped) {
      const std::string w = cur_.value;
      if (w == "var" || w == "const") return parse_variable_statement();
      if (w == "let") {
        Token next = peek();
        if (next.type == TokenType::Identifier || next.is("[") || next.is("{")) return parse_variable_statement();
      }
      if (w == "function") return parse_function(NodeKind::FunctionDeclaration, false);
      if (w == "async") {
        Token next = peek();
        if (next.is_word("function") && !next.newline_before) {
          advance();
          return parse_function(NodeKind::FunctionDeclaration, true, start);
        }
      }
      if (w == "class") return parse_class(NodeKind::ClassDeclaration);
      if (w == "if") return parse_if();
      if (w == "for") return parse_for();
      if (w == "while") {
        advance();
        expect("(");
        NodeId test = parse_expression(true);
        expect(")");
        NodeId body = parse_statement();
        return make(NodeKind::While, start, {test, body});
      }
      if (w == "do") {
        advance();
        NodeId body = parse_statement();
        if (!eat_word("while")) fail("expected 'while'");
        expect("(");
        NodeId test = parse_expression(true);
        expect(")");
        eat(";");
        return make(NodeKind::DoWhile, start, {body, test});
      }
      if (w == "return" || w == "throw") {
        advance();
        NodeId arg = kNoNode;
        if (!at(";") && !at("}") && cur_.type != TokenType::EndOfFile && !cur_.newline_before) {
          arg = parse_expression(true);
        }
        consume_semicolon();
        return make(w == "return" ? NodeKind::Return : NodeKind::Throw, start, {arg});
      }
      if (w == "break" || w == "continue") {
        NodeKind kind = w == "break" ? NodeKind::Break : NodeKind::Continue;
        advance();
        std::string label;
        if (cur_.type == TokenType::Identifier && !cur_.newline_before && !is_reserved(cur_)) {
          label = cur_.value;
          advance();
        }
        consume_semicolon();
        return make(kind, start, {}, std::move(label));
      }
      if (w == "try") return parse_try();
      if (w == "switch") return parse_switch();
      if (w == "debugger") {
        advance();
        consume_semicolon();
        return make(NodeKind::Debugger, start);
      }
      if (w == "with") {
        advance();
        expect("(");
        NodeId object = parse_expression(true);
        expect(")");
        NodeId body = parse_statement();
        return make(NodeKind::With, start, {object, body});
      }
      if (w == "import") {
        Token next = peek();
        if (!next.is("(") && !next.is(".")) return parse_import();
      }
      if (w == "export") return parse_export();
      if (!is_reserved(cur_) && peek().is(":")) {
        std::string label = cur_.value;
        advance();
        advance();
        NodeId body = parse_statement();
        return make(NodeKind::Labeled, start, {body}, std::move(label));
      }
    }
    NodeId expr = parse_expression(true);
    consume_semicolon();
    return make(NodeKind::ExpressionStatement, start, {expr});
  }

  NodeId parse_block() {
    Token start = cur_;
    expect("{");
    std::vector<NodeId> body;
    while (!at("}")) {
      if (cur_.type == TokenType::EndOfFile) fail("unterminated block");
      body.push_back(parse_statement());
    }
    advance();
    return make(NodeKind::Block, start, std::move(body));
  }

  NodeId parse_variable_declaration(bool allow_in) {
    Token start = cur_;
    std::string kind = cur_.value;
    advance();
    std::vector<NodeId> declarators;
    do {
      Token decl_start = cur_;
      NodeId target = parse_binding_target();
      NodeId init = kNoNode;
      if (eat("=")) init = parse_assignment(allow_in);
      declarators.push_back(make(NodeKind::VariableDeclarator, decl_start, {target, init}));
    } while (eat(","));
    return make(NodeKind::VariableDeclaration, start, std::move(declarators), std::move(kind));
  }

  NodeId parse_variable_statement() {
    NodeId decl = parse_variable_declaration(true);
    consume_semicolon();
    return decl;
  }

  NodeId parse_if() {
    Token start = cur_;
    advance();
    expect("(");
    NodeId test = parse_expression(true);
    expect(")");
    NodeId consequent = parse_statement();
    NodeId alternate = kNoNode;
    if (eat_word("else")) alternate = parse_statement();
    return make(NodeKind::If, start, {test, consequent, alternate});
  }

  NodeId parse_for() {
    Token start = cur_;
    advance();
    eat_word("await");
    expect("(");
    NodeId init = kNoNode;
    if (at(";")) {
      // no initializer
    } else if (at_word("var") || at_word("const") ||
               (at_word("let") && (peek().type == TokenType::Identifier || peek().is("[") || peek().is("{")))) {
      init = parse_variable_declaration(false);
    } else {
      init = parse_expression(false);
    }
    if (init != kNoNode && (at_word("of") || at_word("in"))) {
      bool is_of = at_word("of");
      advance();
      if (tree_.kind(init) != NodeKind::VariableDeclaration) init = to_pattern(init);
      NodeId right = is_of ? parse_assignment(true) : parse_expression(true);
      expect(")");
      NodeId body = parse_statement();
      return make(is_of ? NodeKind::ForOf : NodeKind::ForIn, start, {init, right, body});
    }
    expect(";");
    NodeId test = at(";") ? kNoNode : parse_expression(true);
    expect(";");
    NodeId update = at(")") ? kNoNode : parse_expression(true);
    expect(")");
    NodeId body = parse_statement();
    return make(NodeKind::For, start, {init, test, update, body});
  }

  NodeId parse_try() {
    Token start = cur_;
    advance();
    NodeId block = parse_block();
    NodeId handler = kNoNode;
    NodeId finalizer = kNoNode;
    if (at_word("catch")) {
      Token catch_start = cur_;
      advance();
      NodeId param = kNoNode;
      if (eat("(")) {
        param = parse_binding_target();
        expect(")");
      }
      NodeId body = parse_block();
      handler = make(NodeKind::CatchClause, catch_start, {param, body});
    }
    if (eat_word("finally")) finalizer = parse_block();
    if (handler == kNoNode && finalizer == kNoNode) fail("missing catch or finally");
    return make(NodeKind::Try, start, {block, handler, finalizer});
  }

  NodeId parse_switch() {
    Token start = cur_;
    advance();
    expect("(");
    std::vector<NodeId> children{parse_expression(true)};
    expect(")");
    expect("{");
    while (!eat("}")) {
      Token case_start = cur_;
      std::vector<NodeId> clause;
      if (eat_word("case")) {
        clause.push_back(parse_expression(true));
      } else if (eat_word("default")) {
        clause.push_back(kNoNode);
      } else {
        unexpected();
      }
      expect(":");
      while (!at("}") && !at_word("case") && !at_word("default")) {
        if (cur_.type == TokenType::EndOfFile) unexpected();
        clause.push_back(parse_statement());
      }
      children.push_back(make(NodeKind::SwitchCase, case_start, std::move(clause)));
    }
    return make(NodeKind::Switch, start, std::move(children));
  }

  std::string parse_module_specifier() {
    if (cur_.type != TokenType::String) fail("expected module specifier");
    std::string value = cur_.value;
    advance();
    return value;
  }

  void skip_import_attributes() {
    if ((at_word("assert") || at_word("with")) && !cur_.newline_before) {
      advance();
      parse_object_literal();
    }
  }

  NodeId parse_import() {
    Token start = cur_;
    advance();
    std::vector<NodeId> specifiers;
    auto specifier = [&](const Token& at_tok, std::string imported, NodeId local) {
      specifiers.push_back(make(NodeKind::ImportSpecifier, at_tok, {local}, std::move(imported)));
    };
    if (cur_.type != TokenType::String) {
      if (cur_.type == TokenType::Identifier && !at("{")) {
        Token tok = cur_;
        specifier(tok, "default", parse_binding_identifier());
        eat(",");
      }
      if (at("*")) {
        Token tok = cur_;
        advance();
        if (!eat_word("as")) fail("expected 'as'");
        specifier(tok, "*", parse_binding_identifier());
      } else if (eat("{")) {
        while (!eat("}")) {
          Token tok = cur_;
          std::string imported;
          if (cur_.type == TokenType::Identifier || cur_.type == TokenType::String) {
            imported = cur_.value;
            advance();
          } else {
            unexpected();
          }
          NodeId local;
          if (eat_word("as")) {
            local = parse_binding_identifier();
          } else {
            local = identifier_from(tok);
          }
          specifier(tok, std::move(imported), local);
          if (!at("}")) expect(",");
        }
      }
      if (!eat_word("from")) fail("expected 'from'");
    }
    std::string source = parse_module_specifier();
    skip_import_attributes();
    consume_semicolon();
    return make(NodeKind::ImportDeclaration, start, std::move(specifiers), std::move(source));
  }

  NodeId parse_export() {
    Token start = cur_;
    advance();
    std::vector<NodeId> children;
    if (eat_word("default")) {
      if (at_word("function") || (at_word("async") && peek().is_word("function"))) {
        bool is_async = eat_word("async");
        children.push_back(parse_function(NodeKind::FunctionDeclaration, is_async, start, true));
      } else if (at_word("class")) {
        children.push_back(parse_class(NodeKind::ClassDeclaration, true));
      } else {
        children.push_back(parse_assignment(true));
        consume_semicolon();
      }
    } else if (at("*")) {
      advance();
      if (eat_word("as")) advance();
      if (!eat_word("from")) fail("expected 'from'");
      parse_module_specifier();
      skip_import_attributes();
      consume_semicolon();
    } else if (eat("{")) {
      while (!eat("}")) {
        if (cur_.type != TokenType::Identifier && cur_.type != TokenType::String) unexpected();
        advance();
        if (eat_word("as")) advance();
        if (!at("}")) expect(",");
      }
      if (eat_word("from")) {
        parse_module_specifier();
        skip_import_attributes();
      }
      consume_semicolon();
    } else {
      children.push_back(parse_statement());
    }
    return make(NodeKind::ExportDeclaration, start, std::move(children));
  }

  // ---- functions and classes ----

  struct FunctionContext {
    bool is_async;
    bool is_generator;
  };

  FunctionContext enter_function(bool is_async, bool is_generator) {
    FunctionContext saved{in_async_, in_generator_};
    in_async_ = is_async;
    in_generator_ = is_generator;
    return saved;
  }

  void leave_function(FunctionContext saved) {
    in_async_ = saved.is_async;
    in_generator_ = saved.is_generator;
  }

  std::vector<NodeId> parse_parameters() {
    expect("(");
    std::vector<NodeId> params;
    while (!eat(")")) {
      if (at("...")) {
        Token tok = cur_;
        advance();
        params.push_back(make(NodeKind::RestElement, tok, {parse_binding_target()}));
      } else {
        params.push_back(parse_binding_element());
      }
      if (!at(")")) expect(",");
    }
    return params;
  }

  // Parses from the `function` keyword on. `start` is the first token of the
  // construct (it differs from the keyword for `async function`).
  NodeId parse_function(NodeKind kind, bool is_async, std::optional<Token> start = std::nullopt,
                        bool name_optional = false) {
    Token first = start.value_or(cur_);
    if (!eat_word("function")) fail("expected 'function'");
    bool is_generator = eat("*");
    NodeId name = kNoNode;
    std::string text;
    if (cur_.type == TokenType::Identifier && !at("(")) {
      text = cur_.value;
      name = parse_binding_identifier();
    } else if (kind == NodeKind::FunctionDeclaration && !name_optional) {
      fail("function declaration requires a name");
    }
    FunctionContext saved = enter_function(is_async, is_generator);
    std::vector<NodeId> children{name, kNoNode};
    for (NodeId p : parse_parameters()) children.push_back(p);
    children[1] = parse_block();
    leave_function(saved);
    std::uint32_t flags = (is_async ? nf::kAsync : 0) | (is_generator ? nf::kGenerator : 0);
    return make(kind, first, std::move(children), std::move(text), flags);
  }

  // Method body after its key: `(params) { ... }`.
  NodeId parse_method_function(const Token& start, bool is_async, bool is_generator) {
    FunctionContext saved = enter_function(is_async, is_generator);
    std::vector<NodeId> children{kNoNode, kNoNode};
    for (NodeId p : parse_parameters()) children.push_back(p);
    children[1] = parse_block();
    leave_function(saved);
    std::uint32_t flags = (is_async ? nf::kAsync : 0) | (is_generator ? nf::kGenerator : 0);
    return make(NodeKind::FunctionExpression, start, std::move(children), {}, flags);
  }

  struct PropertyKey {
    NodeId node = kNoNode;
    bool computed = false;
  };

  PropertyKey parse_property_key() {
    Token tok = cur_;
    switch (cur_.type) {
      case TokenType::Identifier:
        advance();
        return {identifier_from(tok), false};
      case TokenType::PrivateName:
        advance();
        return {make(NodeKind::PrivateName, tok, {}, tok.value), false};
      case TokenType::String:
        advance();
        return {make(NodeKind::StringLiteral, tok, {}, tok.value), false};
      case TokenType::Number:
        advance();
        return {make(NodeKind::NumberLiteral, tok, {}, tok.value), false};
      default:
        break;
    }
    if (eat("[")) {
      NodeId key = parse_assignment(true);
      expect("]");
      return {key, true};
    }
    unexpected();
  }

  // Modifier words (`static`, `async`, `get`, `set`) double as property
  // names; they act as modifiers only when another key follows.
  bool modifier_applies() {
    Token next = peek();
    if (next.type == TokenType::EndOfFile) return false;
    if (next.is("(") || next.is("=") || next.is(";") || next.is("}") || next.is(",") || next.is(":")) {
      return false;
    }
    return true;
  }

  NodeId parse_class(NodeKind kind, bool name_optional = false) {
    Token start = cur_;
    advance();
    NodeId name = kNoNode;
    std::string text;
    if (cur_.type == TokenType::Identifier && !at_word("extends") && !at("{")) {
      text = cur_.value;
      name = parse_binding_identifier();
    } else if (kind == NodeKind::ClassDeclaration && !name_optional) {
      fail("class declaration requires a name");
    }
    NodeId superclass = kNoNode;
    if (eat_word("extends")) superclass = parse_lhs();
    std::vector<NodeId> children{name, superclass};
    expect("{");
    while (!eat("}")) {
      if (eat(";")) continue;
      if (cur_.type == TokenType::EndOfFile) unexpected();
      children.push_back(parse_class_member());
    }
    return make(kind, start, std::move(children), std::move(text));
  }

  NodeId parse_class_member() {
    Token start = cur_;
    std::uint32_t flags = 0;
    if (at_word("static") && peek().is("{")) {
      advance();
      FunctionContext saved = enter_function(false, false);
      NodeId body = parse_block();
      leave_function(saved);
      return make(NodeKind::StaticBlock, start, {body});
    }
    if (at_word("static") && modifier_applies()) {
      advance();
      flags |= nf::kStatic;
    }
    bool is_async = false;
    bool is_generator = false;
    if (at_word("async") && modifier_applies() && !peek().newline_before) {
      advance();
      is_async = true;
    }
    if (eat("*")) is_generator = true;
    if ((at_word("get") || at_word("set")) && modifier_applies()) {
      flags |= at_word("get") ? nf::kGetter : nf::kSetter;
      advance();
    }
    PropertyKey key = parse_property_key();
    if (key.computed) flags |= nf::kComputed;
    if (at("(")) {
      NodeId fn = parse_method_function(start, is_async, is_generator);
      return make(NodeKind::MethodDefinition, start, {key.node, fn}, {}, flags | nf::kMethod);
    }
    NodeId value = kNoNode;
    if (eat("=")) {
      FunctionContext saved = enter_function(false, false);
      value = parse_assignment(true);
      leave_function(saved);
    }
    consume_semicolon();
    return make(NodeKind::ClassField, start, {key.node, value}, {}, flags);
  }

  // ---- binding patterns ----

  NodeId parse_binding_target() {
    Token start = cur_;
    if (at("[")) {
      advance();
      std::vector<NodeId> elements;
      while (!eat("]")) {
        if (at(",")) {
          advance();
          elements.push_back(kNoNode);
          continue;
        }
        if (at("...")) {
          Token tok = cur_;
          advance();
          elements.push_back(make(NodeKind::RestElement, tok, {parse_binding_target()}));
        } else {
          elements.push_back(parse_binding_element());
        }
        if (!at("]")) expect(",");
      }
      return make(NodeKind::ArrayPattern, start, std::move(elements));
    }
    if (at("{")) {
      advance();
      std::vector<NodeId> properties;
      while (!eat("}")) {
        Token tok = cur_;
        if (eat("...")) {
          properties.push_back(make(NodeKind::RestElement, tok, {parse_binding_target()}));
        } else {
          PropertyKey key = parse_property_key();
          NodeId value;
          std::uint32_t flags = key.computed ? nf::kComputed : 0;
          if (eat(":")) {
            value = parse_binding_element();
          } else {
            if (key.computed || tree_.kind(key.node) != NodeKind::Identifier) fail("expected ':'");
            flags |= nf::kShorthand;
            value = make(NodeKind::Identifier, tok, {}, tree_.node(key.node).text);
            if (eat("=")) value = make(NodeKind::AssignmentPattern, tok, {value, parse_assignment(true)});
          }
          properties.push_back(make(NodeKind::PatternProperty, tok, {key.node, value}, {}, flags));
        }
        if (!at("}")) expect(",");
      }
      return make(NodeKind::ObjectPattern, start, std::move(properties));
    }
    return parse_binding_identifier();
  }

  NodeId parse_binding_element() {
    Token start = cur_;
    NodeId target = parse_binding_target();
    if (eat("=")) return make(NodeKind::AssignmentPattern, start, {target, parse_assignment(true)});
    return target;
  }

  // Reinterprets an expression parsed before `=` or `=>` as a pattern.
  NodeId to_pattern(NodeId id) {
    SyntaxNode& n = node(id);
    switch (n.kind) {
      case NodeKind::Identifier:
      case NodeKind::MemberExpression:
      case NodeKind::ComputedMemberExpression:
      case NodeKind::ObjectPattern:
      case NodeKind::ArrayPattern:
      case NodeKind::AssignmentPattern:
      case NodeKind::RestElement:
        return id;
      case NodeKind::ArrayExpression: {
        n.kind = NodeKind::ArrayPattern;
        std::vector<NodeId> elements = n.children;
        for (NodeId& e : elements) {
          if (e != kNoNode) e = to_pattern(e);
        }
        node(id).children = std::move(elements);
        return id;
      }
      case NodeKind::ObjectExpression: {
        n.kind = NodeKind::ObjectPattern;
        std::vector<NodeId> properties = n.children;
        for (NodeId p : properties) {
          SyntaxNode& prop = node(p);
          if (prop.kind == NodeKind::SpreadElement) {
            prop.kind = NodeKind::RestElement;
            NodeId arg = prop.children[0];
            node(p).children[0] = to_pattern(arg);
          } else if (prop.kind == NodeKind::Property) {
            if (prop.has(nf::kMethod)) fail("invalid destructuring target");
            prop.kind = NodeKind::PatternProperty;
            NodeId value = prop.children[1];
            node(p).children[1] = to_pattern(value);
          }
        }
        return id;
      }
      case NodeKind::AssignmentExpression:
        if (n.text != "=") fail("invalid destructuring target");
        n.kind = NodeKind::AssignmentPattern;
        n.text.clear();
        {
          NodeId target = n.children[0];
          node(id).children[0] = to_pattern(target);
        }
        return id;
      case NodeKind::SpreadElement: {
        n.kind = NodeKind::RestElement;
        NodeId arg = n.children[0];
        node(id).children[0] = to_pattern(arg);
        return id;
      }
      default:
        lex_.fail(n.line, n.column, "invalid assignment target");
    }
  }

  // ---- expressions ----

  NodeId parse_expression(bool allow_in) {
    Token start = cur_;
    NodeId first = parse_assignment(allow_in);
    if (!at(",")) return first;
    std::vector<NodeId> items{first};
    while (eat(",")) items.push_back(parse_assignment(allow_in));
    return make(NodeKind::SequenceExpression, start, std::move(items));
  }

  NodeId parse_arrow(const Token& start, std::vector<NodeId> params, bool is_async, bool allow_in) {
    if (cur_.newline_before) fail("line break before '=>'");
    expect("=>");
    FunctionContext saved = enter_function(is_async, false);
    std::vector<NodeId> children{kNoNode, kNoNode};
    for (NodeId p : params) children.push_back(to_pattern(p));
    std::uint32_t flags = is_async ? nf::kAsync : 0;
    if (at("{")) {
      children[1] = parse_block();
    } else {
      children[1] = parse_assignment(allow_in);
      flags |= nf::kExpressionBody;
    }
    leave_function(saved);
    return make(NodeKind::ArrowFunction, start, std::move(children), {}, flags);
  }

  NodeId parse_assignment(bool allow_in) {
    NestingGuard guard(*this);
    Token start = cur_;
    if (cur_.type == TokenType::Identifier && !is_reserved(cur_)) {
      if (in_generator_ && at_word("yield")) return parse_yield(allow_in);
      Token next = peek();
      if (next.is("=>")) {
        NodeId param = parse_binding_identifier();
        return parse_arrow(start, {param}, false, allow_in);
      }
      if (at_word("async") && next.type == TokenType::Identifier && !next.newline_before &&
          !is_reserved(next) && peek(2).is("=>")) {
        advance();
        NodeId param = parse_binding_identifier();
        return parse_arrow(start, {param}, true, allow_in);
      }
    }
    NodeId left = parse_conditional(allow_in);
    if (at("=>")) {
      if (paren_nodes_.contains(left) && prev_.is(")")) {
        const SyntaxNode& n = tree_.node(left);
        std::vector<NodeId> params;
        if (n.kind == NodeKind::SequenceExpression) {
          params = n.children;
        } else {
          params.push_back(left);
        }
        return parse_arrow(start, std::move(params), false, allow_in);
      }
      const SyntaxNode& n = tree_.node(left);
      if (n.kind == NodeKind::CallExpression && prev_.is(")")) {
        const SyntaxNode& callee = tree_.node(n.children[0]);
        if (callee.kind == NodeKind::Identifier && callee.text == "async") {
          std::vector<NodeId> params(n.children.begin() + 1, n.children.end());
          return parse_arrow(start, std::move(params), true, allow_in);
        }
      }
      unexpected();
    }
    if (is_assignment_operator(cur_)) {
      std::string op = cur_.value;
      if (op == "=") {
        left = to_pattern(left);
      } else {
        NodeKind k = tree_.kind(left);
        if (k != NodeKind::Identifier && k != NodeKind::MemberExpression &&
            k != NodeKind::ComputedMemberExpression) {
          fail("invalid assignment target");
        }
      }
      advance();
      NodeId right = parse_assignment(allow_in);
      return make(NodeKind::AssignmentExpression, start, {left, right}, std::move(op));
    }
    return left;
  }

  NodeId parse_yield(bool allow_in) {
    Token start = cur_;
    advance();
    std::uint32_t flags = 0;
    if (!cur_.newline_before && eat("*")) flags |= nf::kGenerator;
    NodeId arg = kNoNode;
    if (!cur_.newline_before && can_start_expression(cur_) && !at_word("in") && !at_word("of")) {
      arg = parse_assignment(allow_in);
    }
    return make(NodeKind::YieldExpression, start, {arg}, {}, flags);
  }

  NodeId parse_conditional(bool allow_in) {
    Token start = cur_;
    NodeId test = parse_binary(0, allow_in);
    if (!eat("?")) return test;
    NodeId consequent = parse_assignment(true);
    expect(":");
    NodeId alternate = parse_assignment(allow_in);
    return make(NodeKind::ConditionalExpression, start, {test, consequent, alternate});
  }

  NodeId parse_binary(int min_precedence, bool allow_in) {
    Token start = cur_;
    NodeId left = parse_unary();
    while (true) {
      int prec = binary_precedence(cur_, allow_in);
      if (prec == 0 || prec <= min_precedence) break;
      std::string op = cur_.value;
      advance();
      // `**` is right-associative
      NodeId right = parse_binary(op == "**" ? prec - 1 : prec, allow_in);
      NodeKind kind = (op == "&&" || op == "||" || op == "??") ? NodeKind::LogicalExpression
                                                              : NodeKind::BinaryExpression;
      left = make(kind, start, {left, right}, std::move(op));
    }
    return left;
  }

  NodeId parse_unary() {
    NestingGuard guard(*this);
    Token start = cur_;
    if (cur_.type == TokenType::Punctuator) {
      const std::string& op = cur_.value;
      if (op == "!" || op == "~" || op == "+" || op == "-") {
        std::string text = op;
        advance();
        return make(NodeKind::UnaryExpression, start, {parse_unary()}, std::move(text));
      }
      if (op == "++" || op == "--") {
        std::string text = op;
        advance();
        return make(NodeKind::UpdateExpression, start, {parse_unary()}, std::move(text), nf::kPrefix);
      }
    } else if (cur_.type == TokenType::Identifier && !cur_.escaped) {
      const std::string& w = cur_.value;
      if (w == "typeof" || w == "void" || w == "delete") {
        std::string text = w;
        advance();
        return make(NodeKind::UnaryExpression, start, {parse_unary()}, std::move(text));
      }
      if (w == "await") {
        Token next = peek();
        bool operand_follows = !next.newline_before && can_start_expression(next) &&
                               binary_precedence(next, true) == 0 && !next.is("=>") &&
                               !next.is("(") && !is_assignment_operator(next);
        if (in_async_ || operand_follows) {
          advance();
          return make(NodeKind::AwaitExpression, start, {parse_unary()});
        }
      }
    }
    NodeId expr = parse_lhs();
    if ((at("++") || at("--")) && !cur_.newline_before) {
      std::string op = cur_.value;
      advance();
      return make(NodeKind::UpdateExpression, start, {expr}, std::move(op));
    }
    return expr;
  }

  std::vector<NodeId> parse_arguments() {
    expect("(");
    std::vector<NodeId> args;
    while (!eat(")")) {
      if (at("...")) {
        Token tok = cur_;
        advance();
        args.push_back(make(NodeKind::SpreadElement, tok, {parse_assignment(true)}));
      } else {
        args.push_back(parse_assignment(true));
      }
      if (!at(")")) expect(",");
    }
    return args;
  }

  NodeId parse_property_name_after_dot(const Token& start, NodeId object, std::uint32_t flags) {
    Token tok = cur_;
    if (cur_.type == TokenType::Identifier) {
      advance();
      NodeId prop = identifier_from(tok);
      return make(NodeKind::MemberExpression, start, {object, prop}, tok.value, flags);
    }
    if (cur_.type == TokenType::PrivateName) {
      advance();
      NodeId prop = make(NodeKind::PrivateName, tok, {}, tok.value);
      return make(NodeKind::ComputedMemberExpression, start, {object, prop}, {}, flags);
    }
    fail("expected property name");
  }

  NodeId parse_new() {
    Token start = cur_;
    advance();
    if (eat(".")) {
      if (!at_word("target")) fail("expected 'target'");
      advance();
      return make(NodeKind::MetaProperty, start, {}, "new.target");
    }
    NodeId callee = at_word("new") ? parse_new() : parse_primary();
    callee = parse_suffixes(start, callee, false);
    std::vector<NodeId> children{callee};
    if (at("(")) {
      for (NodeId a : parse_arguments()) children.push_back(a);
    }
    return make(NodeKind::NewExpression, start, std::move(children));
  }

  NodeId parse_lhs() {
    Token start = cur_;
    NodeId expr = at_word("new") ? parse_new() : parse_primary();
    return parse_suffixes(start, expr, true);
  }

  NodeId parse_suffixes(const Token& start, NodeId expr, bool allow_calls) {
    while (true) {
      if (at(".")) {
        advance();
        expr = parse_property_name_after_dot(start, expr, 0);
      } else if (at("?.")) {
        if (!allow_calls) break;
        advance();
        if (at("(")) {
          std::vector<NodeId> children{expr};
          for (NodeId a : parse_arguments()) children.push_back(a);
          expr = make(NodeKind::CallExpression, start, std::move(children), {}, nf::kOptional);
        } else if (eat("[")) {
          NodeId prop = parse_expression(true);
          expect("]");
          expr = make(NodeKind::ComputedMemberExpression, start, {expr, prop}, {}, nf::kOptional);
        } else {
          expr = parse_property_name_after_dot(start, expr, nf::kOptional);
        }
      } else if (at("[")) {
        advance();
        NodeId prop = parse_expression(true);
        expect("]");
        expr = make(NodeKind::ComputedMemberExpression, start, {expr, prop});
      } else if (at("(") && allow_calls) {
        std::vector<NodeId> children{expr};
        for (NodeId a : parse_arguments()) children.push_back(a);
        expr = make(NodeKind::CallExpression, start, std::move(children));
      } else if (cur_.type == TokenType::Template) {
        NodeId quasi = parse_template();
        expr = make(NodeKind::TaggedTemplate, start, {expr, quasi});
      } else {
        break;
      }
    }
    return expr;
  }

  NodeId parse_template() {
    Token start = cur_;
    std::string cooked = cur_.value;
    std::vector<NodeId> substitutions;
    while (!cur_.template_tail) {
      advance();
      substitutions.push_back(parse_expression(true));
      if (!at("}")) fail("expected '}' in template literal");
      cur_ = lex_.continue_template(cur_);
      cooked += cur_.value;
    }
    advance();
    std::uint32_t flags = substitutions.empty() ? 0 : nf::kSubstitutions;
    return make(NodeKind::TemplateLiteral, start, std::move(substitutions), std::move(cooked), flags);
  }

  NodeId parse_parenthesized() {
    Token start = cur_;
    advance();
    if (at(")")) {
      advance();
      if (!at("=>")) unexpected();
      NodeId empty = make(NodeKind::SequenceExpression, start);
      paren_nodes_.insert(empty);
      return empty;
    }
    std::vector<NodeId> items;
    while (true) {
      if (at("...")) {
        Token tok = cur_;
        advance();
        items.push_back(make(NodeKind::SpreadElement, tok, {parse_binding_target()}));
      } else {
        items.push_back(parse_assignment(true));
      }
      if (!eat(",")) break;
      if (at(")")) break;
    }
    expect(")");
    NodeId result = items.size() == 1 && tree_.kind(items[0]) != NodeKind::SpreadElement
                        ? items[0]
                        : make(NodeKind::SequenceExpression, start, std::move(items));
    paren_nodes_.insert(result);
    return result;
  }

  NodeId parse_array_literal() {
    Token start = cur_;
    advance();
    std::vector<NodeId> elements;
    while (!eat("]")) {
      if (at(",")) {
        advance();
        elements.push_back(kNoNode);
        continue;
      }
      if (at("...")) {
        Token tok = cur_;
        advance();
        elements.push_back(make(NodeKind::SpreadElement, tok, {parse_assignment(true)}));
      } else {
        elements.push_back(parse_assignment(true));
      }
      if (!at("]")) expect(",");
    }
    return make(NodeKind::ArrayExpression, start, std::move(elements));
  }

  NodeId parse_object_literal() {
    Token start = cur_;
    expect("{");
    std::vector<NodeId> properties;
    while (!eat("}")) {
      properties.push_back(parse_object_member());
      if (!at("}")) expect(",");
    }
    return make(NodeKind::ObjectExpression, start, std::move(properties));
  }

  NodeId parse_object_member() {
    Token start = cur_;
    if (eat("...")) return make(NodeKind::SpreadElement, start, {parse_assignment(true)});
    std::uint32_t flags = 0;
    bool is_async = false;
    bool is_generator = false;
    if (at_word("async") && modifier_applies() && !peek().newline_before) {
      advance();
      is_async = true;
    }
    if (eat("*")) is_generator = true;
    if ((at_word("get") || at_word("set")) && modifier_applies()) {
      flags |= at_word("get") ? nf::kGetter : nf::kSetter;
      advance();
    }
    PropertyKey key = parse_property_key();
    if (key.computed) flags |= nf::kComputed;
    if (at("(")) {
      NodeId fn = parse_method_function(start, is_async, is_generator);
      return make(NodeKind::Property, start, {key.node, fn}, {}, flags | nf::kMethod);
    }
    if (eat(":")) return make(NodeKind::Property, start, {key.node, parse_assignment(true)}, {}, flags);
    if (key.computed || tree_.kind(key.node) != NodeKind::Identifier) fail("expected ':'");
    flags |= nf::kShorthand;
    NodeId value = make(NodeKind::Identifier, start, {}, tree_.node(key.node).text);
    if (at("=")) {
      // cover grammar for `{a = 1} = obj`
      advance();
      NodeId fallback = parse_assignment(true);
      value = make(NodeKind::AssignmentExpression, start, {value, fallback}, "=");
    }
    return make(NodeKind::Property, start, {key.node, value}, {}, flags);
  }

  NodeId parse_primary() {
    Token start = cur_;
    switch (cur_.type) {
      case TokenType::Number:
        advance();
        return make(NodeKind::NumberLiteral, start, {}, start.value);
      case TokenType::String:
        advance();
        return make(NodeKind::StringLiteral, start, {}, start.value);
      case TokenType::Template:
        return parse_template();
      case TokenType::PrivateName:
        advance();
        return make(NodeKind::PrivateName, start, {}, start.value);
      case TokenType::Punctuator:
        if (at("(")) return parse_parenthesized();
        if (at("[")) return parse_array_literal();
        if (at("{")) return parse_object_literal();
        if (at("/") || at("/=")) {
          cur_ = lex_.rescan_as_regex(cur_);
          Token tok = cur_;
          advance();
          return make(NodeKind::RegExpLiteral, tok, {}, tok.value);
        }
        unexpected();
      case TokenType::Identifier:
        break;
      default:
        unexpected();
    }
    const std::string& w = cur_.value;
    if (!cur_.escaped) {
      if (w == "this") {
        advance();
        return make(NodeKind::This, start);
      }
      if (w == "super") {
        advance();
        return make(NodeKind::Super, start);
      }
      if (w == "null" || w == "true" || w == "false") {
        advance();
        return make(NodeKind::Literal, start, {}, start.value);
      }
      if (w == "function") return parse_function(NodeKind::FunctionExpression, false);
      if (w == "async") {
        Token next = peek();
        if (next.is_word("function") && !next.newline_before) {
          advance();
          return parse_function(NodeKind::FunctionExpression, true, start);
        }
      }
      if (w == "class") return parse_class(NodeKind::ClassExpression);
      if (w == "import") {
        advance();
        if (eat(".")) {
          if (cur_.type != TokenType::Identifier) unexpected();
          advance();
          return make(NodeKind::MetaProperty, start, {}, "import.meta");
        }
        std::vector<NodeId> args = parse_arguments();
        return make(NodeKind::ImportExpression, start, std::move(args));
      }
      if (is_reserved(cur_)) unexpected();
    }
    advance();
    return identifier_from(start);
  }

  Lexer lex_;
  SyntaxTree tree_;
  Token cur_;
  Token prev_;
  bool in_async_ = false;
  bool in_generator_ = false;
  std::unordered_set<NodeId> paren_nodes_;
  std::vector<std::uint32_t> depth_;
  int nesting_ = 0;
  static constexpr int kMaxNesting = 800;
  static constexpr std::uint32_t kMaxTreeDepth = 2000;
};

}  // namespace

SyntaxTree parse_source(std::string_view text, std::string file_id) {
  Parser parser(text, std::move(file_id));
  return parser.parse_program();
}

}  // namespace deadlisten::miner
