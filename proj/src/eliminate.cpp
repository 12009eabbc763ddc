#include "lacuna/eliminate.hpp"

#include <json.hpp>

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "lacuna/edits.hpp"
#include "lacuna/emit.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/fsutil.hpp"
#include "lacuna/js/parser.hpp"
#include "lacuna/js/scope.hpp"

namespace lacuna {

namespace {

using js::Binding;
using js::Node;
using js::NodeType;
using js::Scope;
using js::ScopeModel;

struct Span {
    uint32_t start = 0;
    uint32_t end = 0;
};

bool strictly_inside(Span inner, Span outer) {
    if (inner.start == outer.start && inner.end == outer.end) return false;
    return outer.start <= inner.start && inner.end <= outer.end;
}

std::string js_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\' || c == '"') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string stub_text(const std::string& id, bool arrow_expr_body) {
    std::string call = "__lacuna_lazyLoad(\"" + js_escape(id) + "\", function (fd) { eval(fd); });";
    return arrow_expr_body ? "{" + call + "}" : call;
}

std::string helper_text(int port) {
    return "\nfunction __lacuna_lazyLoad(id, cb) {\n"
           "  fetch(\"http://127.0.0.1:" +
           std::to_string(port) +
           "\", { method: \"POST\", body: id })\n"
           "    .then(function (r) { return r.text(); })\n"
           "    .then(cb);\n"
           "}\n";
}

void collect_export_wrapped(const Node* n, std::unordered_set<const Node*>& out) {
    if (!n) return;
    if (n->type == NodeType::ExportNamedDeclaration || n->type == NodeType::ExportDefaultDeclaration)
        for (const Node* k : n->kids)
            if (k) out.insert(k);
    for (const Node* k : n->kids) collect_export_wrapped(k, out);
}

// Finds the binding of each removed function declaration, resolved from the
// scope enclosing the declaration (its own inner scope could shadow the name
// with a parameter).
void collect_removed_bindings(const Node* n, Scope* scope, const ScopeModel& scopes,
                              const std::unordered_set<const Node*>& removed,
                              std::unordered_set<Binding*>& out) {
    if (!n) return;
    if (n->type == NodeType::FunctionDeclaration && removed.count(n) && n->kids[0]) {
        if (Binding* b = ScopeModel::resolve(scope, n->kids[0]->str)) out.insert(b);
    }
    if (Scope* s = scopes.scope_for(n)) scope = s;
    for (const Node* k : n->kids) collect_removed_bindings(k, scope, scopes, removed, out);
}

// Replaces read references to fully removed declarations with `null`.
// Write targets, binding positions, property keys, and labels are left
// alone: parse safety outranks thoroughness there.
class NullRefs {
public:
    NullRefs(const ScopeModel& scopes, const std::unordered_set<Binding*>& eligible,
             const std::vector<Span>& replaced, EditList& edits)
        : scopes_(scopes), eligible_(eligible), replaced_(replaced), edits_(edits) {}

    void run(const Node* program, Scope* global) { walk(program, global); }

private:
    void maybe_null(const Node* ident, Scope* scope, bool shorthand) {
        Binding* b = ScopeModel::resolve(scope, ident->str);
        if (!b || !eligible_.count(b)) return;
        for (const Span& s : replaced_)
            if (ident->start >= s.start && ident->end <= s.end) return;
        edits_.replace(ident->start, ident->end - ident->start,
                       shorthand ? ident->str + ": null" : "null");
    }

    // Assignment-target position: identifiers stay, but defaults and
    // computed keys inside the pattern are ordinary reads.
    void target(const Node* n, Scope* scope) {
        if (!n) return;
        switch (n->type) {
            case NodeType::Identifier:
                return;
            case NodeType::MemberExpression:
                walk(n->kids[0], scope);
                if (n->flags & js::kComputed) walk(n->kids[1], scope);
                return;
            case NodeType::ObjectPattern:
                for (const Node* p : n->kids) {
                    if (!p) continue;
                    if (p->type == NodeType::Property) {
                        if (p->flags & js::kComputed) walk(p->kids[0], scope);
                        target(p->kids[1], scope);
                    } else {
                        target(p, scope);
                    }
                }
                return;
            case NodeType::ArrayPattern:
                for (const Node* e : n->kids) target(e, scope);
                return;
            case NodeType::AssignmentPattern:
                target(n->kids[0], scope);
                walk(n->kids[1], scope);
                return;
            case NodeType::RestElement:
                target(n->kids[0], scope);
                return;
            default:
                walk(n, scope);
                return;
        }
    }

    void function_node(const Node* n, Scope* scope) {
        for (size_t i = 1; i + 1 < n->kids.size(); ++i) target(n->kids[i], scope);
        walk(n->kids.back(), scope);
    }

    void walk(const Node* n, Scope* scope) {
        if (!n) return;
        if (Scope* s = scopes_.scope_for(n)) scope = s;
        switch (n->type) {
            case NodeType::Identifier:
                maybe_null(n, scope, false);
                return;
            case NodeType::MemberExpression:
                walk(n->kids[0], scope);
                if (n->flags & js::kComputed) walk(n->kids[1], scope);
                return;
            case NodeType::AssignmentExpression:
                target(n->kids[0], scope);
                walk(n->kids[1], scope);
                return;
            case NodeType::UpdateExpression:
                target(n->kids[0], scope);
                return;
            case NodeType::VariableDeclaration:
                for (const Node* d : n->kids) {
                    target(d->kids[0], scope);
                    if (d->kids.size() > 1) walk(d->kids[1], scope);
                }
                return;
            case NodeType::ForInStatement:
                if (n->kids[0]->type == NodeType::VariableDeclaration)
                    walk(n->kids[0], scope);
                else
                    target(n->kids[0], scope);
                walk(n->kids[1], scope);
                walk(n->kids[2], scope);
                return;
            case NodeType::FunctionDeclaration:
            case NodeType::FunctionExpression:
            case NodeType::ArrowFunction:
                function_node(n, scope);
                return;
            case NodeType::Property:
                if (n->flags & js::kComputed) walk(n->kids[0], scope);
                if (n->flags & js::kShorthand) {
                    maybe_null(n->kids[1], scope, true);
                    return;
                }
                walk(n->kids[1], scope);
                return;
            case NodeType::ClassDeclaration:
            case NodeType::ClassExpression:
                walk(n->kids[1], scope);
                walk(n->kids[2], scope);
                return;
            case NodeType::MethodDefinition:
            case NodeType::PropertyDefinition:
                if (n->flags & js::kComputed) walk(n->kids[0], scope);
                if (n->kids.size() > 1) walk(n->kids[1], scope);
                return;
            case NodeType::CatchClause:
                if (n->kids[0]) target(n->kids[0], scope);
                walk(n->kids[1], scope);
                return;
            case NodeType::ImportDeclaration:
            case NodeType::MetaProperty:
                return;
            default:
                for (const Node* k : n->kids) walk(k, scope);
                return;
        }
    }

    const ScopeModel& scopes_;
    const std::unordered_set<Binding*>& eligible_;
    const std::vector<Span>& replaced_;
    EditList& edits_;
};

}  // namespace

const char* to_string(OptLevel level) {
    switch (level) {
        case OptLevel::OL0: return "OL0";
        case OptLevel::OL1: return "OL1";
        case OptLevel::OL2: return "OL2";
        case OptLevel::OL3: return "OL3";
    }
    return "OL0";
}

std::optional<OptLevel> olevel_from_int(int level) {
    if (level < 0 || level > 3) return std::nullopt;
    return static_cast<OptLevel>(level);
}

EliminationPlan classify(const CallGraph& gw) {
    EliminationPlan plan;
    std::set<FunctionId> reach = gw.reachable_from_root();
    for (const auto& [id, node] : gw.nodes()) {
        if (id.is_global()) continue;
        (reach.count(id) ? plan.alive : plan.dead).insert(id);
    }
    return plan;
}

void plan_actions(EliminationPlan& plan, const AppInventory& inv, OptLevel level) {
    plan.actions.clear();
    if (level == OptLevel::OL0) return;

    for (size_t si = 0; si < inv.sources.size(); ++si) {
        std::vector<const FunctionInfo*> dead;
        std::vector<Span> alive;
        for (const FunctionInfo& f : inv.functions) {
            if (f.source_index != si) continue;
            if (plan.alive.count(f.id))
                alive.push_back({f.id.start, f.id.end});
            else if (plan.dead.count(f.id))
                dead.push_back(&f);
        }
        std::sort(dead.begin(), dead.end(), [](const FunctionInfo* a, const FunctionInfo* b) {
            if (a->id.start != b->id.start) return a->id.start < b->id.start;
            return a->id.end > b->id.end;
        });

        std::vector<Span> chosen;
        for (const FunctionInfo* f : dead) {
            Span s{f->id.start, f->id.end};
            bool covered = false;
            for (const Span& c : chosen)
                if (strictly_inside(s, c)) covered = true;
            if (covered) continue;
            bool touches_alive = false;
            for (const Span& a : alive)
                if (strictly_inside(a, s) || strictly_inside(s, a)) touches_alive = true;
            if (touches_alive) continue;
            chosen.push_back(s);
            plan.actions.insert(f->id);
        }
    }
}

void rewrite_app(const AppInventory& inv, const EliminationPlan& plan, OptLevel level,
                 const std::filesystem::path& out, int lazy_port) {
    SourceRewrites rewrites;
    std::map<std::string, std::string> bodies;

    if (level != OptLevel::OL0) {
        // Action lists per source, plus the globally removed declarations
        // (OL3 reference nulling needs the whole-app view first).
        std::vector<std::vector<const FunctionInfo*>> actions(inv.sources.size());
        for (const FunctionInfo& f : inv.functions)
            if (plan.actions.count(f.id)) actions[f.source_index].push_back(&f);

        std::vector<std::unordered_set<const Node*>> export_wrapped(inv.sources.size());
        std::unordered_set<const Node*> removed_decls;
        if (level == OptLevel::OL3) {
            for (size_t si = 0; si < inv.sources.size(); ++si) {
                if (!inv.sources[si].program) continue;
                collect_export_wrapped(inv.sources[si].program, export_wrapped[si]);
                for (const FunctionInfo* f : actions[si])
                    if (f->node->type == NodeType::FunctionDeclaration &&
                        !export_wrapped[si].count(f->node))
                        removed_decls.insert(f->node);
            }
        }
        std::unordered_set<Binding*> eligible;
        if (!removed_decls.empty()) {
            std::unordered_set<Binding*> removed_bindings;
            for (const SourceFile& src : inv.sources)
                if (src.program)
                    collect_removed_bindings(src.program, inv.scopes->global(), *inv.scopes,
                                             removed_decls, removed_bindings);
            for (Binding* b : removed_bindings) {
                bool all_removed = !b->values.empty() && !b->reassigned;
                for (const Node* v : b->values)
                    if (v->type != NodeType::FunctionDeclaration || !removed_decls.count(v))
                        all_removed = false;
                if (all_removed) eligible.insert(b);
            }
        }

        for (size_t si = 0; si < inv.sources.size(); ++si) {
            const SourceFile& src = inv.sources[si];
            if (!src.program) continue;
            EditList edits;
            std::vector<Span> replaced;
            bool affected = false;

            for (const FunctionInfo* f : actions[si]) {
                const Node* n = f->node;
                bool arrow_expr = n->flags & js::kArrowExprBody;
                Span interior{n->body_interior_start, n->body_interior_end};
                switch (level) {
                    case OptLevel::OL1:
                        bodies[f->id.canonical()] =
                            src.text.substr(interior.start, interior.end - interior.start);
                        edits.replace(interior.start, interior.end - interior.start,
                                      stub_text(f->id.canonical(), arrow_expr));
                        replaced.push_back(interior);
                        affected = true;
                        break;
                    case OptLevel::OL2:
                        edits.replace(interior.start, interior.end - interior.start,
                                      arrow_expr ? "{}" : "");
                        replaced.push_back(interior);
                        break;
                    case OptLevel::OL3:
                        if (removed_decls.count(n)) {
                            edits.replace(n->start, n->end - n->start, "");
                            replaced.push_back({n->start, n->end});
                        } else if ((n->flags & js::kMethodFn) || export_wrapped[si].count(n)) {
                            // No clean deletion for members and export-wrapped
                            // declarations; drop the body instead.
                            edits.replace(interior.start, interior.end - interior.start,
                                          arrow_expr ? "{}" : "");
                            replaced.push_back(interior);
                        } else {
                            edits.replace(n->start, n->end - n->start, "null");
                            replaced.push_back({n->start, n->end});
                        }
                        break;
                    default:
                        break;
                }
            }

            if (level == OptLevel::OL3 && !eligible.empty()) {
                NullRefs refs(*inv.scopes, eligible, replaced, edits);
                refs.run(src.program, inv.scopes->global());
            }
            if (level == OptLevel::OL1 && affected)
                edits.insert(static_cast<uint32_t>(src.text.size()), helper_text(lazy_port));

            if (edits.empty()) continue;
            std::string text = edits.apply(src.text);
            js::AstArena arena;
            try {
                js::parse_program(text, arena);
            } catch (const js::SyntaxError& e) {
                throw Error("eliminate", src.app_path + ": rewritten source fails to parse at " +
                                             std::to_string(e.pos) + ": " + e.message);
            }
            rewrites[si] = std::move(text);
        }
    }

    write_app_copy(inv, out, rewrites, level != OptLevel::OL0);
    for (const auto& [id, body] : bodies)
        fsutil::write_file(out / "_lacuna_bodies" / (fsutil::encode_component(id) + ".js"), body);
}

std::string render_report(const std::string& app_label, const CallGraph& gw,
                          const EliminationPlan& plan, OptLevel level) {
    std::map<FunctionId, std::set<std::string>> incoming;
    for (const auto& [key, labels] : gw.edges())
        incoming[key.second].insert(labels.begin(), labels.end());

    nlohmann::ordered_json functions = nlohmann::ordered_json::array();
    for (const auto& [id, node] : gw.nodes()) {
        if (id.is_global()) continue;
        nlohmann::ordered_json entry;
        entry["id"] = id.canonical();
        if (node.name.empty())
            entry["name"] = nullptr;
        else
            entry["name"] = node.name;
        entry["kind"] = to_string(node.kind);
        entry["status"] = plan.dead.count(id) ? "dead" : "alive";
        entry["incoming_labels"] = incoming[id];
        functions.push_back(entry);
    }

    nlohmann::ordered_json doc;
    doc["app"] = app_label;
    doc["level"] = to_string(level);
    doc["functions"] = functions;
    doc["stats"] = {{"total", functions.size()}, {"dead", plan.dead.size()}};
    return doc.dump(2) + "\n";
}

}  // namespace lacuna
