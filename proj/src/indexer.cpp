#include "lacuna/sources.hpp"

namespace lacuna {

using js::Node;
using js::NodeType;

namespace {

class IndexWalker {
public:
    IndexWalker(AppInventory& inv, size_t source_index) : inv_(inv), source_index_(source_index) {}

    void run(const Node* program) { visit(program, ""); }

private:
    void record(const Node* fn, const std::string& name) {
        const SourceFile& src = inv_.sources[source_index_];
        FunctionInfo info;
        info.id = FunctionId{src.app_path, fn->start, fn->end};
        info.name = name;
        info.node = fn;
        info.source_index = source_index_;
        if (src.inline_html) {
            info.kind = FunctionKind::InlineHtml;
        } else if (fn->type == NodeType::FunctionDeclaration) {
            info.kind = FunctionKind::Declaration;
        } else if (fn->type == NodeType::ArrowFunction) {
            info.kind = FunctionKind::Arrow;
        } else if (fn->flags & js::kMethodFn) {
            info.kind = FunctionKind::Method;
        } else {
            info.kind = FunctionKind::Expression;
        }
        size_t idx = inv_.functions.size();
        inv_.functions.push_back(std::move(info));
        inv_.fn_by_node[fn] = idx;
        inv_.fn_by_id[inv_.functions[idx].id] = idx;
    }

    void visit(const Node* n, const std::string& hint) {
        if (!n) return;
        switch (n->type) {
            case NodeType::FunctionDeclaration:
            case NodeType::FunctionExpression:
            case NodeType::ArrowFunction: {
                std::string name = hint;
                if (n->kids[0] && !n->kids[0]->str.empty()) name = n->kids[0]->str;
                record(n, name);
                for (size_t i = 1; i < n->kids.size(); i++) visit(n->kids[i], "");
                return;
            }
            case NodeType::VariableDeclarator: {
                const Node* pattern = n->kids[0];
                std::string h = pattern->type == NodeType::Identifier ? pattern->str : "";
                visit(pattern, "");
                visit(n->kids[1], h);
                return;
            }
            case NodeType::AssignmentExpression: {
                std::string h;
                if (n->str == "=") {
                    const Node* lhs = n->kids[0];
                    if (lhs->type == NodeType::Identifier) h = lhs->str;
                    else if (lhs->type == NodeType::MemberExpression && !(lhs->flags & js::kComputed) &&
                             lhs->kids[1]->type == NodeType::Identifier)
                        h = lhs->kids[1]->str;
                }
                visit(n->kids[0], "");
                visit(n->kids[1], h);
                return;
            }
            case NodeType::Property:
            case NodeType::MethodDefinition:
            case NodeType::PropertyDefinition: {
                std::string h = js::property_key_name(n);
                if (n->flags & js::kComputed) visit(n->kids[0], "");
                if (n->kids.size() > 1) visit(n->kids[1], h);
                return;
            }
            default:
                for (const Node* k : n->kids) visit(k, "");
                return;
        }
    }

    AppInventory& inv_;
    size_t source_index_;
};

}  // namespace

const js::Node* class_constructor(const js::Node* cls) {
    if (!cls) return nullptr;
    const Node* body = cls->kids[2];
    for (const Node* m : body->kids) {
        if (m->type != NodeType::MethodDefinition) continue;
        if (m->flags & (js::kComputed | js::kGetter | js::kSetter | js::kStaticMember)) continue;
        const Node* key = m->kids[0];
        bool named_ctor = (key->type == NodeType::Identifier && key->str == "constructor") ||
                          (key->type == NodeType::StringLiteral && key->str == "constructor");
        if (named_ctor) return m->kids[1];
    }
    return nullptr;
}

void index_functions(AppInventory& inv) {
    inv.functions.clear();
    inv.fn_by_node.clear();
    inv.fn_by_id.clear();

    FunctionInfo root;
    root.id = FunctionId::global_root();
    root.kind = FunctionKind::Global;
    inv.functions.push_back(std::move(root));
    inv.fn_by_id[FunctionId::global_root()] = 0;

    for (size_t i = 0; i < inv.sources.size(); i++) {
        if (!inv.sources[i].program) continue;
        IndexWalker(inv, i).run(inv.sources[i].program);
    }
}

}  // namespace lacuna
