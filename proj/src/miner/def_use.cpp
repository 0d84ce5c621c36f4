#include "deadlisten/miner/def_use.hpp"

#include <algorithm>
#include <climits>
#include <utility>

namespace deadlisten::miner {

namespace {

using ScopeId = std::uint32_t;
constexpr ScopeId kProgramScope = 0;
constexpr int kMaxResolutionDepth = 400;

struct Scope {
  ScopeId parent;
  bool function_scope;
  std::unordered_map<std::string, BindingId> names;
};

Definition value_of(NodeId node) {
  Definition d;
  d.kind = Definition::Kind::Value;
  d.node = node;
  return d;
}

Definition opaque() { return Definition{}; }

bool is_reflective_member(const SyntaxTree& t, NodeId callee) {
  const SyntaxNode& n = t.node(callee);
  return n.kind == NodeKind::MemberExpression &&
         (n.text == "call" || n.text == "apply" || n.text == "bind");
}

bool is_plain_assignment(std::string_view op) {
  return op == "=" || op == "||=" || op == "&&=" || op == "??=";
}

// Walks the tree once, creating scopes and bindings and attaching
// definitions. Identifier references are resolved after the walk so that
// hoisted and later declarations are visible.
class BindingBuilder {
 public:
  BindingBuilder(const SyntaxTree& tree, std::vector<Binding>& bindings,
                 std::unordered_map<NodeId, BindingId>& ids)
      : t_(tree), bindings_(bindings), ids_(ids) {}

  void run() {
    scopes_.push_back(Scope{kProgramScope, true, {}});
    if (t_.root() == kNoNode) return;
    for (NodeId c : t_.children(t_.root())) visit(c, kProgramScope);

    for (auto [ident, scope] : assigned_) {
      if (ids_.contains(ident)) continue;
      if (auto b = lookup(t_.node(ident).text, scope)) {
        ids_[ident] = *b;
      } else {
        declare(ident, kProgramScope);  // implicit global
      }
    }
    for (auto [ident, scope] : references_) {
      if (auto b = lookup(t_.node(ident).text, scope)) ids_[ident] = *b;
    }
    for (auto& [ident, def] : pending_) {
      auto it = ids_.find(ident);
      if (it != ids_.end()) bindings_[it->second].definitions.push_back(std::move(def));
    }
  }

 private:
  ScopeId new_scope(ScopeId parent, bool function_scope) {
    scopes_.push_back(Scope{parent, function_scope, {}});
    return static_cast<ScopeId>(scopes_.size() - 1);
  }

  ScopeId function_scope_of(ScopeId s) const {
    while (!scopes_[s].function_scope) s = scopes_[s].parent;
    return s;
  }

  BindingId declare(NodeId ident, ScopeId scope) {
    const std::string& name = t_.node(ident).text;
    auto& names = scopes_[scope].names;
    auto it = names.find(name);
    BindingId id;
    if (it != names.end()) {
      id = it->second;
    } else {
      id = static_cast<BindingId>(bindings_.size());
      bindings_.push_back(Binding{name, ident, {}});
      names.emplace(name, id);
    }
    ids_[ident] = id;
    return id;
  }

  std::optional<BindingId> lookup(const std::string& name, ScopeId s) const {
    while (true) {
      auto it = scopes_[s].names.find(name);
      if (it != scopes_[s].names.end()) return it->second;
      if (s == kProgramScope) return std::nullopt;
      s = scopes_[s].parent;
    }
  }

  void visit_children(NodeId id, ScopeId s) {
    for (NodeId c : t_.children(id)) visit(c, s);
  }

  void visit(NodeId id, ScopeId s) {
    if (id == kNoNode) return;
    const SyntaxNode& n = t_.node(id);
    switch (n.kind) {
      case NodeKind::Identifier:
        references_.emplace_back(id, s);
        return;
      case NodeKind::PrivateName:
      case NodeKind::StringLiteral:
      case NodeKind::NumberLiteral:
      case NodeKind::RegExpLiteral:
      case NodeKind::Literal:
      case NodeKind::This:
      case NodeKind::Super:
      case NodeKind::MetaProperty:
      case NodeKind::Empty:
      case NodeKind::Debugger:
      case NodeKind::Break:
      case NodeKind::Continue:
        return;
      case NodeKind::MemberExpression:
        visit(n.children[0], s);
        return;
      case NodeKind::Property:
      case NodeKind::MethodDefinition:
      case NodeKind::ClassField:
      case NodeKind::PatternProperty:
        if (n.has(node_flags::kComputed)) visit(n.children[0], s);
        visit(n.children[1], s);
        return;
      case NodeKind::VariableDeclaration: {
        ScopeId target_scope = n.text == "var" ? function_scope_of(s) : s;
        for (NodeId d : n.children) {
          NodeId target = t_.child(d, 0);
          NodeId init = t_.child(d, 1);
          visit(init, s);
          std::optional<Definition> src;
          if (init != kNoNode) src = value_of(init);
          bind(target, s, target_scope, src, true);
        }
        return;
      }
      case NodeKind::FunctionDeclaration:
        if (n.children[0] != kNoNode) {
          declare(n.children[0], s);
          pending_.emplace_back(n.children[0], value_of(id));
        }
        visit_function(id, s);
        return;
      case NodeKind::FunctionExpression:
      case NodeKind::ArrowFunction:
        visit_function(id, s);
        return;
      case NodeKind::ClassDeclaration:
        if (n.children[0] != kNoNode) declare(n.children[0], s);
        for (std::size_t i = 1; i < n.children.size(); ++i) visit(n.children[i], s);
        return;
      case NodeKind::ClassExpression: {
        ScopeId cs = new_scope(s, false);
        if (n.children[0] != kNoNode) declare(n.children[0], cs);
        for (std::size_t i = 1; i < n.children.size(); ++i) visit(n.children[i], cs);
        return;
      }
      case NodeKind::StaticBlock:
        visit(n.children[0], new_scope(s, true));
        return;
      case NodeKind::Block:
      case NodeKind::For:
        visit_children(id, new_scope(s, false));
        return;
      case NodeKind::ForIn:
      case NodeKind::ForOf: {
        ScopeId fs = new_scope(s, false);
        NodeId left = n.children[0];
        if (t_.kind(left) == NodeKind::VariableDeclaration) {
          const SyntaxNode& decl = t_.node(left);
          ScopeId target_scope = decl.text == "var" ? function_scope_of(s) : fs;
          for (NodeId d : decl.children) {
            visit(t_.child(d, 1), fs);
            bind(t_.child(d, 0), fs, target_scope, opaque(), true);
          }
        } else {
          bind(left, fs, fs, opaque(), false);
        }
        visit(n.children[1], fs);
        visit(n.children[2], fs);
        return;
      }
      case NodeKind::CatchClause: {
        ScopeId cs = new_scope(s, false);
        if (n.children[0] != kNoNode) bind(n.children[0], cs, cs, opaque(), true);
        visit(n.children[1], cs);
        return;
      }
      case NodeKind::Switch: {
        visit(n.children[0], s);
        ScopeId ss = new_scope(s, false);
        for (std::size_t i = 1; i < n.children.size(); ++i) visit(n.children[i], ss);
        return;
      }
      case NodeKind::ImportDeclaration:
        for (NodeId spec : n.children) {
          const SyntaxNode& sp = t_.node(spec);
          NodeId local = sp.children[0];
          declare(local, kProgramScope);
          Definition d;
          if (sp.text == "default" || sp.text == "*") {
            d.kind = Definition::Kind::Import;
            d.module = n.text;
          } else if (is_identifier_name(sp.text)) {
            d.kind = Definition::Kind::Import;
            d.module = n.text;
            d.properties.push_back(sp.text);
          }
          pending_.emplace_back(local, std::move(d));
        }
        return;
      case NodeKind::AssignmentExpression:
        if (is_plain_assignment(n.text)) {
          visit(n.children[1], s);
          bind(n.children[0], s, s, value_of(n.children[1]), false);
        } else {
          visit_children(id, s);
        }
        return;
      default:
        visit_children(id, s);
        return;
    }
  }

  void visit_function(NodeId fn, ScopeId outer) {
    const SyntaxNode& n = t_.node(fn);
    ScopeId fs = new_scope(outer, true);
    if (n.kind != NodeKind::FunctionDeclaration && n.children[0] != kNoNode) {
      declare(n.children[0], fs);
      pending_.emplace_back(n.children[0], value_of(fn));
    }
    for (std::size_t i = 2; i < n.children.size(); ++i) {
      NodeId p = n.children[i];
      if (t_.kind(p) == NodeKind::RestElement) {
        bind(p, fs, fs, opaque(), true);
        continue;
      }
      Definition d;
      d.kind = Definition::Kind::Parameter;
      d.node = fn;
      d.index = static_cast<std::uint32_t>(i - 2);
      bind(p, fs, fs, d, true);
    }
    NodeId body = n.children[1];
    if (body == kNoNode) return;
    if (t_.kind(body) == NodeKind::Block) {
      visit_children(body, fs);
    } else {
      visit(body, fs);
    }
  }

  static std::optional<Definition> with_property(const std::optional<Definition>& src,
                                                 const SyntaxTree& t, NodeId key, bool computed) {
    if (!src) return std::nullopt;
    if (src->kind == Definition::Kind::Opaque) return src;
    const SyntaxNode& k = t.node(key);
    bool named = !computed && (k.kind == NodeKind::Identifier || k.kind == NodeKind::StringLiteral) &&
                 is_identifier_name(k.text);
    if (!named) return opaque();
    Definition d = *src;
    d.properties.push_back(k.text);
    return d;
  }

  // Binds every identifier in a pattern. In declaration mode identifiers are
  // declared in `target_scope`; otherwise they are assignment targets looked
  // up from `s`.
  void bind(NodeId p, ScopeId s, ScopeId target_scope, const std::optional<Definition>& src,
            bool declaration) {
    if (p == kNoNode) return;
    const SyntaxNode& n = t_.node(p);
    switch (n.kind) {
      case NodeKind::Identifier:
        if (declaration) {
          declare(p, target_scope);
        } else {
          assigned_.emplace_back(p, s);
        }
        if (src) pending_.emplace_back(p, *src);
        return;
      case NodeKind::ObjectPattern:
        for (NodeId prop : n.children) {
          const SyntaxNode& pp = t_.node(prop);
          if (pp.kind == NodeKind::RestElement) {
            bind(pp.children[0], s, target_scope, opaque(), declaration);
            continue;
          }
          bool computed = pp.has(node_flags::kComputed);
          if (computed) visit(pp.children[0], s);
          bind(pp.children[1], s, target_scope, with_property(src, t_, pp.children[0], computed),
               declaration);
        }
        return;
      case NodeKind::ArrayPattern:
        for (NodeId e : n.children) bind(e, s, target_scope, opaque(), declaration);
        return;
      case NodeKind::AssignmentPattern:
        visit(n.children[1], s);
        bind(n.children[0], s, target_scope, src, declaration);
        bind(n.children[0], s, target_scope, value_of(n.children[1]), declaration);
        return;
      case NodeKind::RestElement:
        bind(n.children[0], s, target_scope, opaque(), declaration);
        return;
      default:
        visit(p, s);
        return;
    }
  }

  const SyntaxTree& t_;
  std::vector<Binding>& bindings_;
  std::unordered_map<NodeId, BindingId>& ids_;
  std::vector<Scope> scopes_;
  std::vector<std::pair<NodeId, ScopeId>> references_;
  std::vector<std::pair<NodeId, ScopeId>> assigned_;
  std::vector<std::pair<NodeId, Definition>> pending_;
};

}  // namespace

std::string normalize_module_specifier(std::string_view specifier) {
  constexpr std::string_view kScheme = "node:";
  if (specifier.starts_with(kScheme)) specifier.remove_prefix(kScheme.size());
  return std::string(specifier);
}

DefUseAnalysis::DefUseAnalysis(const SyntaxTree& tree) : tree_(&tree) {
  build();
  collect_call_sites();
  cache_.resize(bindings_.size());
  partial_.resize(bindings_.size());
  stack_depth_.assign(bindings_.size(), -1);
}

void DefUseAnalysis::build() {
  BindingBuilder builder(*tree_, bindings_, identifier_binding_);
  builder.run();
}

void DefUseAnalysis::collect_call_sites() {
  if (tree_->root() == kNoNode) return;
  for (NodeId id : tree_->preorder()) {
    NodeKind k = tree_->kind(id);
    if (k != NodeKind::CallExpression && k != NodeKind::NewExpression) continue;
    auto children = tree_->children(id);
    if (is_reflective_member(*tree_, children[0])) continue;
    if (k == NodeKind::CallExpression) {
      for (NodeId fn : function_values(children[0])) invocations_[fn].push_back(id);
    }
    for (std::size_t j = 1; j < children.size(); ++j) {
      // positions after a spread are unknown
      if (tree_->kind(children[j]) == NodeKind::SpreadElement) break;
      for (NodeId fn : function_values(children[j])) {
        call_sites_[fn].push_back(CallSite{id, static_cast<std::uint32_t>(j - 1)});
      }
    }
  }
}

std::optional<BindingId> DefUseAnalysis::binding_of(NodeId identifier) const {
  auto it = identifier_binding_.find(identifier);
  if (it == identifier_binding_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> DefUseAnalysis::function_values(NodeId expr) const {
  std::vector<NodeId> out;
  std::vector<bool> seen(bindings_.size(), false);
  function_values_into(expr, out, seen);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void DefUseAnalysis::function_values_into(NodeId expr, std::vector<NodeId>& out,
                                          std::vector<bool>& seen) const {
  if (expr == kNoNode) return;
  const SyntaxNode& n = tree_->node(expr);
  switch (n.kind) {
    case NodeKind::FunctionExpression:
    case NodeKind::ArrowFunction:
    case NodeKind::FunctionDeclaration:
      out.push_back(expr);
      return;
    case NodeKind::Identifier: {
      auto b = binding_of(expr);
      if (!b || seen[*b]) return;
      seen[*b] = true;
      for (const Definition& d : bindings_[*b].definitions) {
        if (d.kind == Definition::Kind::Value && d.properties.empty()) {
          function_values_into(d.node, out, seen);
        }
      }
      return;
    }
    case NodeKind::ConditionalExpression:
      function_values_into(n.children[1], out, seen);
      function_values_into(n.children[2], out, seen);
      return;
    case NodeKind::LogicalExpression:
      function_values_into(n.children[0], out, seen);
      function_values_into(n.children[1], out, seen);
      return;
    case NodeKind::SequenceExpression:
      if (!n.children.empty()) function_values_into(n.children.back(), out, seen);
      return;
    case NodeKind::AssignmentExpression:
      if (is_plain_assignment(n.text)) function_values_into(n.children[1], out, seen);
      return;
    default:
      return;
  }
}

std::vector<AccessPath> DefUseAnalysis::resolve(NodeId expr) {
  depth_ = 0;
  low_ = INT_MAX;
  return resolve_expr(expr);
}

void DefUseAnalysis::normalize(std::vector<AccessPath>& paths) {
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  if (paths.size() > kMaxCandidates) {
    counters_.candidates_truncated += paths.size() - kMaxCandidates;
    paths.resize(kMaxCandidates);
  }
}

void DefUseAnalysis::extend(std::vector<AccessPath>& out, const std::vector<AccessPath>& bases,
                            const PathStep& step) {
  for (const AccessPath& base : bases) {
    if (base.length() >= kWorkingPathLimit) {
      ++counters_.paths_too_long;
      continue;
    }
    out.push_back(base.with(step));
  }
}

std::vector<AccessPath> DefUseAnalysis::resolve_expr(NodeId expr) {
  if (expr == kNoNode) return {};
  if (depth_ > kMaxResolutionDepth) return {};
  ++depth_;
  struct Leave {
    int& d;
    ~Leave() { --d; }
  } leave{depth_};

  const SyntaxNode& n = tree_->node(expr);
  std::vector<AccessPath> out;
  switch (n.kind) {
    case NodeKind::Identifier: {
      auto b = binding_of(expr);
      if (b) return resolve_binding(*b);
      if (n.text == "process") out.emplace_back("process");
      return out;
    }
    case NodeKind::CallExpression: {
      NodeId callee = n.children[0];
      if (is_require_call(*tree_, expr) && !binding_of(callee)) {
        std::string module = normalize_module_specifier(tree_->node(n.children[1]).text);
        if (is_valid_package(module)) out.emplace_back(std::move(module));
        return out;
      }
      if (tree_->kind(callee) == NodeKind::Super || is_reflective_member(*tree_, callee)) return out;
      extend(out, resolve_expr(callee), CallReturn{});
      break;
    }
    case NodeKind::NewExpression:
      extend(out, resolve_expr(n.children[0]), Instance{});
      break;
    case NodeKind::MemberExpression:
      if (!is_identifier_name(n.text)) return out;
      extend(out, resolve_expr(n.children[0]), PropertyRead{n.text});
      break;
    case NodeKind::AssignmentExpression:
      if (!is_plain_assignment(n.text)) return out;
      out = resolve_expr(n.children[1]);
      if (n.text != "=") {
        auto current = resolve_expr(n.children[0]);
        out.insert(out.end(), current.begin(), current.end());
      }
      break;
    case NodeKind::SequenceExpression:
      if (n.children.empty()) return out;
      return resolve_expr(n.children.back());
    case NodeKind::ConditionalExpression: {
      out = resolve_expr(n.children[1]);
      auto other = resolve_expr(n.children[2]);
      out.insert(out.end(), other.begin(), other.end());
      break;
    }
    case NodeKind::LogicalExpression: {
      out = resolve_expr(n.children[0]);
      auto other = resolve_expr(n.children[1]);
      out.insert(out.end(), other.begin(), other.end());
      break;
    }
    default:
      return out;
  }
  normalize(out);
  return out;
}

// Bindings on the current resolution stack yield what they have so far,
// which cuts cycles. A result is cached only when it did not read such a
// partial result of a binding further up the stack.
std::vector<AccessPath> DefUseAnalysis::resolve_binding(BindingId id) {
  if (cache_[id]) return *cache_[id];
  if (stack_depth_[id] >= 0) {
    low_ = std::min(low_, stack_depth_[id]);
    return partial_[id];
  }
  if (depth_ > kMaxResolutionDepth) return {};

  int my_depth = depth_;
  stack_depth_[id] = my_depth;
  partial_[id].clear();
  int saved_low = low_;
  low_ = INT_MAX;

  for (const Definition& def : bindings_[id].definitions) {
    auto paths = resolve_definition(def);
    auto& acc = partial_[id];
    acc.insert(acc.end(), paths.begin(), paths.end());
    normalize(acc);
  }

  stack_depth_[id] = -1;
  std::vector<AccessPath> result = std::move(partial_[id]);
  partial_[id].clear();
  if (low_ >= my_depth) {
    cache_[id] = result;
    low_ = saved_low;
  } else {
    low_ = std::min(saved_low, low_);
  }
  return result;
}

std::vector<AccessPath> DefUseAnalysis::resolve_definition(const Definition& def) {
  std::vector<AccessPath> base;
  switch (def.kind) {
    case Definition::Kind::Value:
      base = resolve_expr(def.node);
      break;
    case Definition::Kind::Import: {
      std::string module = normalize_module_specifier(def.module);
      if (is_valid_package(module)) base.emplace_back(std::move(module));
      break;
    }
    case Definition::Kind::Parameter: {
      auto fn = function_paths(def.node);
      extend(base, fn, Argument{def.index});
      auto local = argument_values(def.node, def.index);
      base.insert(base.end(), local.begin(), local.end());
      normalize(base);
      break;
    }
    case Definition::Kind::Opaque:
      return {};
  }
  for (const std::string& prop : def.properties) {
    std::vector<AccessPath> next;
    extend(next, base, PropertyRead{prop});
    base = std::move(next);
  }
  return base;
}

std::vector<AccessPath> DefUseAnalysis::argument_values(NodeId function, std::uint32_t index) {
  std::vector<AccessPath> out;
  auto it = invocations_.find(function);
  if (it == invocations_.end()) return out;
  const std::vector<NodeId> calls = it->second;
  for (NodeId call : calls) {
    auto children = tree_->children(call);
    if (index + 1 >= children.size()) continue;
    bool spread = false;
    for (std::size_t j = 1; j <= index + 1; ++j) spread = spread || tree_->kind(children[j]) == NodeKind::SpreadElement;
    if (spread) continue;
    auto values = resolve_expr(children[index + 1]);
    out.insert(out.end(), values.begin(), values.end());
  }
  normalize(out);
  return out;
}

std::vector<AccessPath> DefUseAnalysis::function_paths(NodeId function) {
  std::vector<AccessPath> out;
  auto it = call_sites_.find(function);
  if (it == call_sites_.end()) return out;
  // copy: resolution below must not observe a rehash of call_sites_
  const std::vector<CallSite> sites = it->second;
  for (const CallSite& site : sites) {
    NodeId callee = tree_->child(site.call, 0);
    extend(out, resolve_expr(callee), Argument{site.argument});
  }
  normalize(out);
  return out;
}

}  // namespace deadlisten::miner
