#include <vector>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/js/scope.hpp"
#include "lacuna/sources.hpp"

namespace lacuna {

namespace {

using js::Node;
using js::NodeType;
using js::Scope;
using js::ScopeModel;

constexpr const char* kLabel = "static";

class StaticWalk {
public:
    StaticWalk(const AppInventory& inv, CallGraph& g) : inv_(inv), g_(g) {}

    void run(const Node* program) {
        Scope* s = inv_.scopes->scope_for(program);
        walk(program, s ? s : inv_.scopes->global(), FunctionId::global_root());
    }

private:
    void add_target(const FunctionId& caller, const Node* literal) {
        const Node* fn = literal;
        if (literal->type == NodeType::ClassDeclaration || literal->type == NodeType::ClassExpression)
            fn = class_constructor(literal);
        if (!fn) return;
        size_t idx = inv_.index_of(fn);
        if (idx == kNoIndex) return;
        g_.add_edge(caller, inv_.functions[idx].id, kLabel);
    }

    void resolve_callee(const FunctionId& caller, const Node* callee, Scope* scope, bool is_new) {
        switch (callee->type) {
            case NodeType::Identifier: {
                js::Binding* b = ScopeModel::resolve(scope, callee->str);
                if (!b) return;
                for (const Node* v : b->values) {
                    if (!is_new && (v->type == NodeType::ClassDeclaration ||
                                    v->type == NodeType::ClassExpression))
                        continue;
                    add_target(caller, v);
                }
                return;
            }
            case NodeType::FunctionExpression:
            case NodeType::ArrowFunction:
                add_target(caller, callee);
                return;
            case NodeType::ClassExpression:
                if (is_new) add_target(caller, callee);
                return;
            default:
                return;
        }
    }

    void walk(const Node* n, Scope* scope, FunctionId caller) {
        if (!n) return;
        if (Scope* s = inv_.scopes->scope_for(n)) scope = s;
        if (n->is_function()) {
            size_t idx = inv_.index_of(n);
            if (idx != kNoIndex) caller = inv_.functions[idx].id;
        }
        switch (n->type) {
            case NodeType::CallExpression:
            case NodeType::NewExpression:
                resolve_callee(caller, n->kids[0], scope, n->type == NodeType::NewExpression);
                break;
            case NodeType::TaggedTemplate:
                resolve_callee(caller, n->kids[0], scope, false);
                break;
            default:
                break;
        }
        for (const Node* k : n->kids) walk(k, scope, caller);
    }

    const AppInventory& inv_;
    CallGraph& g_;
};

}  // namespace

CallGraph analyze_static(const AppInventory& inv, const CallGraph& g0) {
    CallGraph g = g0;
    StaticWalk w(inv, g);
    for (const SourceFile& src : inv.sources)
        if (src.program) w.run(src.program);
    return g;
}

}  // namespace lacuna
