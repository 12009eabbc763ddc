#pragma once

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "lacuna/js/ast.hpp"

namespace lacuna::js {

struct Scope;

struct Binding {
    enum class Kind { Var, Let, Const, Function, Class, Param, Catch, Import, Implicit };
    std::string name;
    Kind kind = Kind::Var;
    Scope* scope = nullptr;
    // Function or class literals this name may refer to, flow-insensitively.
    // `values` holds declaration-position literals only: declarations,
    // declarator initializers, named-function-expression self references.
    // `assigned_values` holds literals from plain `name = fn` assignments,
    // which only the flow-tracking analyses honor.
    std::vector<const Node*> values;
    std::vector<const Node*> assigned_values;
    // Any write after declaration: assignment of any kind, update expression,
    // destructuring target. Gates removal-time reference rewriting.
    bool reassigned = false;
};

struct Scope {
    enum class Kind { Global, Function, Block, Catch, Class };
    Kind kind;
    Scope* parent = nullptr;
    const Node* owner = nullptr;
    std::map<std::string, Binding> bindings;

    Binding* find_local(const std::string& name) {
        auto it = bindings.find(name);
        return it == bindings.end() ? nullptr : &it->second;
    }
};

// Lexical scope model for one app. All scripts share one global scope, the way
// sibling <script> tags share a window. Register every program first, then
// analyze each; resolution is only meaningful after all programs are analyzed.
class ScopeModel {
public:
    ScopeModel();

    void add_program(const Node* program);      // hoists top-level declarations
    void analyze_program(const Node* program);  // builds the full scope tree

    Scope* global() { return global_; }

    // Scope introduced by this node, if any. Keys: Program, functions, blocks,
    // for loops, catch clauses, switch statements, named class expressions.
    Scope* scope_for(const Node* n) const;

    static Binding* resolve(Scope* from, const std::string& name);

    // Binds `name` in the global scope if nowhere bound (sloppy implicit global).
    Binding* resolve_or_implicit_global(Scope* from, const std::string& name);

private:
    Scope* new_scope(Scope::Kind kind, const Node* owner, Scope* parent);
    Binding* bind(Scope* scope, const std::string& name, Binding::Kind kind);
    void bind_pattern(Scope* scope, const Node* pattern, Binding::Kind kind);
    void seed_declarator_values(Scope* scope, const Node* declarator);
    void hoist_vars(Scope* target, const std::vector<Node*>& stmts);
    void hoist_vars_stmt(Scope* target, const Node* stmt);
    void bind_lexical(Scope* scope, const std::vector<Node*>& stmts);
    void walk(const Node* n, Scope* scope);
    void enter_function(const Node* fn, Scope* outer);
    void mark_reassigned(Scope* scope, const Node* target);

    std::deque<Scope> scopes_;
    Scope* global_ = nullptr;
    std::unordered_map<const Node*, Scope*> by_node_;
};

// True if `n` is a value the call analyses treat as callable: a function
// literal of any kind, or a class (whose call targets its constructor).
bool is_callable_literal(const Node* n);

// Collects identifier leaf names of a binding pattern.
void collect_pattern_names(const Node* pattern, std::vector<const Node*>& out);

// Static name of a Property / MethodDefinition / PropertyDefinition key.
// Computed keys and unsupported key forms yield "".
std::string property_key_name(const Node* member);

}  // namespace lacuna::js
