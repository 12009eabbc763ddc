#include <map>
#include <set>
#include <string>
#include <vector>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/js/scope.hpp"
#include "lacuna/sources.hpp"

namespace lacuna {

namespace {

using js::Binding;
using js::Node;
using js::NodeType;
using js::Scope;
using js::ScopeModel;

// Abstract value sets over program slots. A slot is either a variable
// binding, the app-wide abstract field for one property name, the implicit
// global-object property for an undeclared name, or a per-call-site
// accumulator. Subset edges between slots are solved to a fixpoint; values
// are callable literals (function or class nodes).
struct Slot {
    std::set<const Node*> values;
    std::vector<int> outs;
};

struct EvalResult {
    std::set<const Node*> literals;
    std::set<int> slots;

    void merge(const EvalResult& o) {
        literals.insert(o.literals.begin(), o.literals.end());
        slots.insert(o.slots.begin(), o.slots.end());
    }
};

struct CallSite {
    FunctionId caller;
    int targets = -1;
    int callbacks = -1;  // natives mode: function-valued args of a native call
    bool is_new = false;
};

class FieldEngine {
public:
    FieldEngine(const AppInventory& inv, CallGraph& g, const std::string& label,
                const NativeTable* natives)
        : inv_(inv), g_(g), label_(label) {
        if (natives)
            for (const std::string& entry : *natives)
                native_names_.insert(entry.substr(entry.rfind('.') + 1));
        natives_on_ = natives != nullptr;
    }

    void run() {
        for (const SourceFile& src : inv_.sources) {
            if (!src.program) continue;
            Scope* s = inv_.scopes->scope_for(src.program);
            walk(src.program, s ? s : inv_.scopes->global(), FunctionId::global_root());
        }
        solve();
        emit();
    }

private:
    // ---- slot machinery ----

    int new_slot() {
        slots_.push_back({});
        return static_cast<int>(slots_.size()) - 1;
    }

    void add_value(int slot, const Node* v) {
        if (slots_[slot].values.insert(v).second) dirty_.push_back(slot);
    }

    void add_flow(int from, int to) {
        if (from == to) return;
        slots_[from].outs.push_back(to);
        for (const Node* v : slots_[from].values) add_value(to, v);
    }

    int var_slot(Binding* b) {
        auto it = var_slots_.find(b);
        if (it != var_slots_.end()) return it->second;
        int s = new_slot();
        var_slots_.emplace(b, s);
        for (const Node* v : b->values) add_value(s, v);
        for (const Node* v : b->assigned_values) add_value(s, v);
        return s;
    }

    int field_slot(const std::string& name) {
        auto it = field_slots_.find(name);
        if (it != field_slots_.end()) return it->second;
        int s = new_slot();
        field_slots_.emplace(name, s);
        return s;
    }

    // Undeclared names read or written in sloppy code live on the global
    // object; one slot per name keeps those flows connected.
    int implicit_slot(const std::string& name) {
        auto it = implicit_slots_.find(name);
        if (it != implicit_slots_.end()) return it->second;
        int s = new_slot();
        implicit_slots_.emplace(name, s);
        return s;
    }

    void flow_into(const EvalResult& src, int dest) {
        for (const Node* v : src.literals) add_value(dest, v);
        for (int s : src.slots) add_flow(s, dest);
    }

    void solve() {
        while (!dirty_.empty()) {
            int s = dirty_.back();
            dirty_.pop_back();
            auto outs = slots_[s].outs;
            for (int t : outs)
                for (const Node* v : slots_[s].values) add_value(t, v);
        }
    }

    // ---- abstract evaluation ----

    bool native_match(const std::string& name) const {
        return natives_on_ && native_names_.count(name) != 0;
    }

    EvalResult eval(const Node* n, Scope* scope) {
        EvalResult r;
        if (!n) return r;
        switch (n->type) {
            case NodeType::Identifier: {
                Binding* b = ScopeModel::resolve(scope, n->str);
                r.slots.insert(b ? var_slot(b) : implicit_slot(n->str));
                return r;
            }
            case NodeType::FunctionExpression:
            case NodeType::ArrowFunction:
            case NodeType::ClassExpression:
                r.literals.insert(n);
                return r;
            case NodeType::MemberExpression:
                if (!(n->flags & js::kComputed) && n->kids[1]->type == NodeType::Identifier)
                    r.slots.insert(field_slot(n->kids[1]->str));
                return r;
            case NodeType::AssignmentExpression:
                return eval(n->kids[1], scope);
            case NodeType::SequenceExpression:
                return eval(n->kids.back(), scope);
            case NodeType::ConditionalExpression: {
                r = eval(n->kids[1], scope);
                r.merge(eval(n->kids[2], scope));
                return r;
            }
            case NodeType::LogicalExpression: {
                r = eval(n->kids[0], scope);
                r.merge(eval(n->kids[1], scope));
                return r;
            }
            case NodeType::AwaitExpression:
                return eval(n->kids[0], scope);
            case NodeType::CallExpression: {
                // f.bind(...) evaluates to f for table-known bind.
                const Node* callee = n->kids[0];
                if (callee->type == NodeType::MemberExpression &&
                    !(callee->flags & js::kComputed) &&
                    callee->kids[1]->type == NodeType::Identifier &&
                    callee->kids[1]->str == "bind" && native_match("bind"))
                    return eval(callee->kids[0], scope);
                return r;
            }
            default:
                return r;
        }
    }

    // ---- constraint generation ----

    void destructure_object(const Node* pattern, Scope* scope) {
        for (const Node* p : pattern->kids) {
            if (!p || p->type != NodeType::Property) continue;
            std::string key = js::property_key_name(p);
            const Node* target = p->kids[1];
            const Node* dflt = nullptr;
            if (target->type == NodeType::AssignmentPattern) {
                dflt = target->kids[1];
                target = target->kids[0];
            }
            if (target->type == NodeType::Identifier) {
                Binding* b = ScopeModel::resolve(scope, target->str);
                int dest = b ? var_slot(b) : implicit_slot(target->str);
                if (!key.empty()) add_flow(field_slot(key), dest);
                if (dflt) flow_into(eval(dflt, scope), dest);
            } else if (target->type == NodeType::ObjectPattern) {
                destructure_object(target, scope);
            }
        }
    }

    void handle_declarator(const Node* d, Scope* scope) {
        const Node* pattern = d->kids[0];
        const Node* init = d->kids[1];
        if (pattern->type == NodeType::Identifier) {
            if (!init) return;
            Binding* b = ScopeModel::resolve(scope, pattern->str);
            if (b) flow_into(eval(init, scope), var_slot(b));
        } else if (pattern->type == NodeType::ObjectPattern) {
            destructure_object(pattern, scope);
        }
    }

    void handle_assignment(const Node* n, Scope* scope) {
        const std::string& op = n->str;
        if (op != "=" && op != "||=" && op != "&&=" && op != "?\?=") return;
        const Node* target = n->kids[0];
        EvalResult value = eval(n->kids[1], scope);
        if (target->type == NodeType::Identifier) {
            Binding* b = ScopeModel::resolve(scope, target->str);
            flow_into(value, b ? var_slot(b) : implicit_slot(target->str));
        } else if (target->type == NodeType::MemberExpression) {
            if (!(target->flags & js::kComputed) && target->kids[1]->type == NodeType::Identifier)
                flow_into(value, field_slot(target->kids[1]->str));
        } else if (target->type == NodeType::ObjectPattern) {
            destructure_object(target, scope);
        }
    }

    void handle_object_literal(const Node* n, Scope* scope) {
        for (const Node* p : n->kids) {
            if (p->type != NodeType::Property) continue;
            if (p->flags & (js::kGetter | js::kSetter)) continue;
            std::string key = js::property_key_name(p);
            if (key.empty()) continue;
            flow_into(eval(p->kids[1], scope), field_slot(key));
        }
    }

    void handle_class_body(const Node* body, Scope* scope) {
        for (const Node* m : body->kids) {
            if (m->flags & (js::kGetter | js::kSetter)) continue;
            std::string key = js::property_key_name(m);
            if (key.empty() || key == "constructor") continue;
            if (m->type == NodeType::MethodDefinition)
                add_value(field_slot(key), m->kids[1]);
            else if (m->type == NodeType::PropertyDefinition && m->kids[1])
                flow_into(eval(m->kids[1], scope), field_slot(key));
        }
    }

    void handle_call(const Node* n, Scope* scope, const FunctionId& caller) {
        CallSite site;
        site.caller = caller;
        site.is_new = n->type == NodeType::NewExpression;
        site.targets = new_slot();
        const Node* callee = n->kids[0];

        flow_into(eval(callee, scope), site.targets);

        if (natives_on_) {
            std::string native;
            if (callee->type == NodeType::Identifier &&
                !ScopeModel::resolve(scope, callee->str) && native_match(callee->str)) {
                native = callee->str;
            } else if (callee->type == NodeType::MemberExpression &&
                       !(callee->flags & js::kComputed) &&
                       callee->kids[1]->type == NodeType::Identifier &&
                       native_match(callee->kids[1]->str)) {
                native = callee->kids[1]->str;
            }
            if (native == "call" || native == "apply") {
                // The invoked function is the member's receiver.
                flow_into(eval(callee->kids[0], scope), site.targets);
            } else if (!native.empty() && native != "bind") {
                site.callbacks = new_slot();
                for (size_t i = 1; i < n->kids.size(); ++i)
                    flow_into(eval(n->kids[i], scope), site.callbacks);
            }
        }
        sites_.push_back(site);
    }

    void walk(const Node* n, Scope* scope, FunctionId caller) {
        if (!n) return;
        if (Scope* s = inv_.scopes->scope_for(n)) scope = s;
        if (n->is_function()) {
            size_t idx = inv_.index_of(n);
            if (idx != kNoIndex) caller = inv_.functions[idx].id;
        }
        switch (n->type) {
            case NodeType::VariableDeclaration:
                for (const Node* d : n->kids) handle_declarator(d, scope);
                break;
            case NodeType::AssignmentExpression:
                handle_assignment(n, scope);
                break;
            case NodeType::ObjectExpression:
                handle_object_literal(n, scope);
                break;
            case NodeType::ClassDeclaration:
            case NodeType::ClassExpression:
                handle_class_body(n->kids[2], scope);
                break;
            case NodeType::CallExpression:
            case NodeType::NewExpression:
                handle_call(n, scope, caller);
                break;
            case NodeType::TaggedTemplate: {
                CallSite site;
                site.caller = caller;
                site.targets = new_slot();
                flow_into(eval(n->kids[0], scope), site.targets);
                sites_.push_back(site);
                break;
            }
            default:
                break;
        }
        for (const Node* k : n->kids) walk(k, scope, caller);
    }

    // ---- edge emission ----

    void add_edge_to(const FunctionId& caller, const Node* target, bool allow_class) {
        const Node* fn = target;
        if (target->type == NodeType::ClassDeclaration || target->type == NodeType::ClassExpression) {
            if (!allow_class) return;
            fn = class_constructor(target);
            if (!fn) return;
        }
        size_t idx = inv_.index_of(fn);
        if (idx == kNoIndex) return;
        g_.add_edge(caller, inv_.functions[idx].id, label_);
    }

    void emit() {
        for (const CallSite& site : sites_) {
            for (const Node* v : slots_[site.targets].values)
                add_edge_to(site.caller, v, site.is_new);
            if (site.callbacks >= 0)
                for (const Node* v : slots_[site.callbacks].values)
                    add_edge_to(site.caller, v, false);
        }
    }

    const AppInventory& inv_;
    CallGraph& g_;
    std::string label_;
    bool natives_on_ = false;
    std::set<std::string> native_names_;

    std::vector<Slot> slots_;
    std::map<Binding*, int> var_slots_;
    std::map<std::string, int> field_slots_;
    std::map<std::string, int> implicit_slots_;
    std::vector<int> dirty_;
    std::vector<CallSite> sites_;
};

}  // namespace

namespace detail {

CallGraph run_field_based(const AppInventory& inv, const CallGraph& g0,
                          const std::string& label, const NativeTable* natives) {
    CallGraph g = g0;
    FieldEngine engine(inv, g, label, natives);
    engine.run();
    return g;
}

}  // namespace detail

CallGraph analyze_acg(const AppInventory& inv, const CallGraph& g0) {
    return detail::run_field_based(inv, g0, "acg", nullptr);
}

}  // namespace lacuna
