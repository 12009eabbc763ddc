#include "lacuna/js/scope.hpp"

namespace lacuna::js {

bool is_callable_literal(const Node* n) {
    if (!n) return false;
    return n->is_function() || n->type == NodeType::ClassDeclaration ||
           n->type == NodeType::ClassExpression;
}

void collect_pattern_names(const Node* pattern, std::vector<const Node*>& out) {
    if (!pattern) return;
    switch (pattern->type) {
        case NodeType::Identifier:
            out.push_back(pattern);
            return;
        case NodeType::ObjectPattern:
            for (const Node* k : pattern->kids) {
                if (!k) continue;
                if (k->type == NodeType::Property)
                    collect_pattern_names(k->kids[1], out);
                else
                    collect_pattern_names(k, out);  // RestElement
            }
            return;
        case NodeType::ArrayPattern:
            for (const Node* k : pattern->kids) collect_pattern_names(k, out);
            return;
        case NodeType::AssignmentPattern:
        case NodeType::RestElement:
            collect_pattern_names(pattern->kids[0], out);
            return;
        default:
            return;  // member expressions in assignment patterns bind nothing
    }
}

ScopeModel::ScopeModel() {
    scopes_.push_back(Scope{Scope::Kind::Global, nullptr, nullptr, {}});
    global_ = &scopes_.back();
}

Scope* ScopeModel::new_scope(Scope::Kind kind, const Node* owner, Scope* parent) {
    scopes_.push_back(Scope{kind, parent, owner, {}});
    Scope* s = &scopes_.back();
    by_node_[owner] = s;
    return s;
}

Scope* ScopeModel::scope_for(const Node* n) const {
    auto it = by_node_.find(n);
    return it == by_node_.end() ? nullptr : it->second;
}

Binding* ScopeModel::resolve(Scope* from, const std::string& name) {
    for (Scope* s = from; s; s = s->parent)
        if (Binding* b = s->find_local(name)) return b;
    return nullptr;
}

Binding* ScopeModel::resolve_or_implicit_global(Scope* from, const std::string& name) {
    if (Binding* b = resolve(from, name)) return b;
    return bind(global_, name, Binding::Kind::Implicit);
}

Binding* ScopeModel::bind(Scope* scope, const std::string& name, Binding::Kind kind) {
    auto [it, inserted] = scope->bindings.try_emplace(name);
    Binding& b = it->second;
    if (inserted) {
        b.name = name;
        b.kind = kind;
        b.scope = scope;
    }
    return &b;
}

void ScopeModel::bind_pattern(Scope* scope, const Node* pattern, Binding::Kind kind) {
    std::vector<const Node*> names;
    collect_pattern_names(pattern, names);
    for (const Node* id : names) bind(scope, id->str, kind);
}

void ScopeModel::seed_declarator_values(Scope* scope, const Node* declarator) {
    const Node* pattern = declarator->kids[0];
    const Node* init = declarator->kids[1];
    if (pattern->type != NodeType::Identifier || !is_callable_literal(init)) return;
    Binding* b = scope->find_local(pattern->str);
    if (b) b->values.push_back(init);
}

void ScopeModel::hoist_vars_stmt(Scope* target, const Node* stmt) {
    if (!stmt) return;
    switch (stmt->type) {
        case NodeType::VariableDeclaration:
            if (stmt->str == "var") {
                for (const Node* d : stmt->kids) {
                    bind_pattern(target, d->kids[0], Binding::Kind::Var);
                    seed_declarator_values(target, d);
                }
            }
            return;
        case NodeType::FunctionDeclaration:
            if (const Node* name = function_name(stmt)) {
                Binding* b = bind(target, name->str, Binding::Kind::Function);
                b->values.push_back(stmt);
            }
            return;
        case NodeType::BlockStatement:
        case NodeType::Program:
            hoist_vars(target, stmt->kids);
            return;
        case NodeType::IfStatement:
            hoist_vars_stmt(target, stmt->kids[1]);
            hoist_vars_stmt(target, stmt->kids[2]);
            return;
        case NodeType::ForStatement:
            hoist_vars_stmt(target, stmt->kids[0]);
            hoist_vars_stmt(target, stmt->kids[3]);
            return;
        case NodeType::ForInStatement:
            hoist_vars_stmt(target, stmt->kids[0]);
            hoist_vars_stmt(target, stmt->kids[2]);
            return;
        case NodeType::WhileStatement:
            hoist_vars_stmt(target, stmt->kids[1]);
            return;
        case NodeType::DoWhileStatement:
            hoist_vars_stmt(target, stmt->kids[0]);
            return;
        case NodeType::TryStatement:
            hoist_vars_stmt(target, stmt->kids[0]);
            if (stmt->kids[1]) hoist_vars_stmt(target, stmt->kids[1]->kids[1]);
            hoist_vars_stmt(target, stmt->kids[2]);
            return;
        case NodeType::SwitchStatement:
            for (size_t i = 1; i < stmt->kids.size(); i++)
                for (size_t j = 1; j < stmt->kids[i]->kids.size(); j++)
                    hoist_vars_stmt(target, stmt->kids[i]->kids[j]);
            return;
        case NodeType::LabeledStatement:
            hoist_vars_stmt(target, stmt->kids[0]);
            return;
        case NodeType::WithStatement:
            hoist_vars_stmt(target, stmt->kids[1]);
            return;
        case NodeType::ExportNamedDeclaration:
        case NodeType::ExportDefaultDeclaration:
            if (!stmt->kids.empty()) hoist_vars_stmt(target, stmt->kids[0]);
            return;
        default:
            return;
    }
}

void ScopeModel::hoist_vars(Scope* target, const std::vector<Node*>& stmts) {
    for (const Node* s : stmts) hoist_vars_stmt(target, s);
}

void ScopeModel::bind_lexical(Scope* scope, const std::vector<Node*>& stmts) {
    for (const Node* stmt : stmts) {
        if (!stmt) continue;
        const Node* s = stmt;
        if ((s->type == NodeType::ExportNamedDeclaration ||
             s->type == NodeType::ExportDefaultDeclaration) &&
            !s->kids.empty() && s->kids[0])
            s = s->kids[0];
        switch (s->type) {
            case NodeType::VariableDeclaration:
                if (s->str != "var") {
                    Binding::Kind kind =
                        s->str == "const" ? Binding::Kind::Const : Binding::Kind::Let;
                    for (const Node* d : s->kids) {
                        bind_pattern(scope, d->kids[0], kind);
                        seed_declarator_values(scope, d);
                    }
                }
                break;
            case NodeType::ClassDeclaration:
                if (const Node* name = s->kids[0]) {
                    Binding* b = bind(scope, name->str, Binding::Kind::Class);
                    b->values.push_back(s);
                }
                break;
            case NodeType::ImportDeclaration:
                for (const Node* id : s->kids) bind(scope, id->str, Binding::Kind::Import);
                break;
            default:
                break;
        }
    }
}

void ScopeModel::add_program(const Node* program) {
    by_node_[program] = global_;
    hoist_vars(global_, program->kids);
    bind_lexical(global_, program->kids);
}

void ScopeModel::enter_function(const Node* fn, Scope* outer) {
    Scope* s = new_scope(Scope::Kind::Function, fn, outer);
    if (fn->type == NodeType::FunctionExpression && function_name(fn)) {
        Binding* self = bind(s, function_name(fn)->str, Binding::Kind::Function);
        self->values.push_back(fn);
    }
    for (size_t i = 0; i < function_param_count(fn); i++) {
        const Node* p = function_param(fn, i);
        bind_pattern(s, p, Binding::Kind::Param);
        // Walk default values in the function scope.
        if (p->type == NodeType::AssignmentPattern) walk(p->kids[1], s);
        if (p->type == NodeType::ObjectPattern || p->type == NodeType::ArrayPattern) walk(p, s);
    }
    const Node* body = function_body(fn);
    if (body->type == NodeType::BlockStatement) {
        hoist_vars(s, body->kids);
        bind_lexical(s, body->kids);
        for (const Node* k : body->kids) walk(k, s);
    } else {
        walk(body, s);
    }
}

void ScopeModel::analyze_program(const Node* program) {
    for (const Node* k : program->kids) walk(k, global_);
}

void ScopeModel::mark_reassigned(Scope* scope, const Node* target) {
    if (!target) return;
    switch (target->type) {
        case NodeType::Identifier:
            resolve_or_implicit_global(scope, target->str)->reassigned = true;
            return;
        case NodeType::ObjectPattern:
            for (const Node* p : target->kids) {
                if (!p) continue;
                if (p->type == NodeType::Property)
                    mark_reassigned(scope, p->kids[1]);
                else
                    mark_reassigned(scope, p);
            }
            return;
        case NodeType::ArrayPattern:
            for (const Node* e : target->kids) mark_reassigned(scope, e);
            return;
        case NodeType::AssignmentPattern:
        case NodeType::RestElement:
            mark_reassigned(scope, target->kids[0]);
            return;
        default:
            // Member targets write properties, not bindings.
            return;
    }
}

void ScopeModel::walk(const Node* n, Scope* scope) {
    if (!n) return;
    switch (n->type) {
        case NodeType::FunctionDeclaration:
        case NodeType::FunctionExpression:
        case NodeType::ArrowFunction:
            enter_function(n, scope);
            return;

        case NodeType::ClassDeclaration:
        case NodeType::ClassExpression: {
            Scope* cls = scope;
            if (n->type == NodeType::ClassExpression && n->kids[0]) {
                cls = new_scope(Scope::Kind::Class, n, scope);
                Binding* b = bind(cls, n->kids[0]->str, Binding::Kind::Class);
                b->values.push_back(n);
            }
            walk(n->kids[1], cls);  // heritage
            for (const Node* m : n->kids[2]->kids) walk(m, cls);
            return;
        }

        case NodeType::MethodDefinition:
        case NodeType::PropertyDefinition:
        case NodeType::Property:
            if (n->flags & kComputed) walk(n->kids[0], scope);
            if (n->kids.size() > 1) walk(n->kids[1], scope);
            return;

        case NodeType::BlockStatement: {
            Scope* b = new_scope(Scope::Kind::Block, n, scope);
            bind_lexical(b, n->kids);
            for (const Node* k : n->kids) walk(k, b);
            return;
        }

        case NodeType::ForStatement:
        case NodeType::ForInStatement: {
            Scope* f = new_scope(Scope::Kind::Block, n, scope);
            const Node* init = n->kids[0];
            if (init && init->type == NodeType::VariableDeclaration && init->str != "var") {
                Binding::Kind kind =
                    init->str == "const" ? Binding::Kind::Const : Binding::Kind::Let;
                for (const Node* d : init->kids) {
                    bind_pattern(f, d->kids[0], kind);
                    seed_declarator_values(f, d);
                }
            }
            if (n->type == NodeType::ForInStatement && init &&
                init->type != NodeType::VariableDeclaration)
                mark_reassigned(f, init);
            for (const Node* k : n->kids) walk(k, f);
            return;
        }

        case NodeType::SwitchStatement: {
            Scope* b = new_scope(Scope::Kind::Block, n, scope);
            walk(n->kids[0], b);
            for (size_t i = 1; i < n->kids.size(); i++) {
                const Node* c = n->kids[i];
                std::vector<Node*> stmts(c->kids.begin() + 1, c->kids.end());
                bind_lexical(b, stmts);
            }
            for (size_t i = 1; i < n->kids.size(); i++)
                for (const Node* k : n->kids[i]->kids) walk(k, b);
            return;
        }

        case NodeType::CatchClause: {
            Scope* c = new_scope(Scope::Kind::Catch, n, scope);
            if (n->kids[0]) bind_pattern(c, n->kids[0], Binding::Kind::Catch);
            walk(n->kids[1], c);
            return;
        }

        case NodeType::VariableDeclaration:
            for (const Node* d : n->kids) {
                walk(d->kids[0], scope);
                walk(d->kids[1], scope);
            }
            return;

        case NodeType::UpdateExpression:
            mark_reassigned(scope, n->kids[0]);
            walk(n->kids[0], scope);
            return;

        case NodeType::AssignmentExpression:
            mark_reassigned(scope, n->kids[0]);
            if (n->str == "=" && n->kids[0]->type == NodeType::Identifier &&
                is_callable_literal(n->kids[1])) {
                Binding* b = resolve_or_implicit_global(scope, n->kids[0]->str);
                b->assigned_values.push_back(n->kids[1]);
            }
            walk(n->kids[0], scope);
            walk(n->kids[1], scope);
            return;

        default:
            for (const Node* k : n->kids) walk(k, scope);
            return;
    }
}

std::string property_key_name(const Node* member) {
    if (member->flags & kComputed) return "";
    const Node* key = member->kids[0];
    switch (key->type) {
        case NodeType::Identifier:
        case NodeType::StringLiteral:
        case NodeType::NumericLiteral:  // str holds the raw literal text
            return key->str;
        case NodeType::PrivateName:
            return "#" + key->str;
        default:
            return "";
    }
}

}  // namespace lacuna::js
