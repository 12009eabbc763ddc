#include "lacuna/cg.hpp"

#include <charconv>
#include <deque>

#include <nlohmann/json.hpp>

#include "lacuna/errors.hpp"

namespace lacuna {

std::string FunctionId::canonical() const {
    return file + "[" + std::to_string(start) + ":" + std::to_string(end) + "]";
}

static bool parse_u32(std::string_view text, uint32_t& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

std::optional<FunctionId> FunctionId::parse(const std::string& text) {
    if (text.empty() || text.back() != ']') return std::nullopt;
    auto open = text.rfind('[');
    if (open == std::string::npos || open == 0) return std::nullopt;
    std::string_view span(text.data() + open + 1, text.size() - open - 2);
    auto colon = span.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    FunctionId id;
    id.file = text.substr(0, open);
    if (!parse_u32(span.substr(0, colon), id.start)) return std::nullopt;
    if (!parse_u32(span.substr(colon + 1), id.end)) return std::nullopt;
    return id;
}

const char* to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::Global: return "global";
        case FunctionKind::Declaration: return "declaration";
        case FunctionKind::Expression: return "expression";
        case FunctionKind::Arrow: return "arrow";
        case FunctionKind::Method: return "method";
        case FunctionKind::InlineHtml: return "inline-html";
    }
    return "expression";
}

std::optional<FunctionKind> function_kind_from_string(const std::string& text) {
    if (text == "global") return FunctionKind::Global;
    if (text == "declaration") return FunctionKind::Declaration;
    if (text == "expression") return FunctionKind::Expression;
    if (text == "arrow") return FunctionKind::Arrow;
    if (text == "method") return FunctionKind::Method;
    if (text == "inline-html") return FunctionKind::InlineHtml;
    return std::nullopt;
}

CallGraph CallGraph::with_root() {
    CallGraph g;
    g.add_node({FunctionId::global_root(), FunctionKind::Global, ""});
    return g;
}

void CallGraph::add_node(const FunctionNode& node) {
    if (node.kind == FunctionKind::Global && !node.id.is_global())
        throw Error("cg", "global kind requires the reserved <global>[0:0] id, got " + node.id.canonical());
    if (node.kind != FunctionKind::Global && node.id.is_global())
        throw Error("cg", "the <global>[0:0] id is reserved for the root");
    if (node.kind == FunctionKind::Global) {
        for (const auto& [id, existing] : nodes_)
            if (existing.kind == FunctionKind::Global && id != node.id)
                throw Error("cg", "a graph holds exactly one global node");
    }
    auto [it, inserted] = nodes_.emplace(node.id, node);
    if (!inserted && it->second != node)
        throw Error("cg", "conflicting redefinition of node " + node.id.canonical());
}

const FunctionNode* CallGraph::find_node(const FunctionId& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

void CallGraph::add_edge(const FunctionId& caller, const FunctionId& callee, const std::string& analyzer) {
    if (analyzer.empty()) throw Error("cg", "edge label must be non-empty");
    if (!has_node(caller)) throw Error("cg", "unknown edge endpoint " + caller.canonical());
    if (!has_node(callee)) throw Error("cg", "unknown edge endpoint " + callee.canonical());
    edges_[{caller, callee}].insert(analyzer);
}

const std::set<std::string>* CallGraph::edge_labels(const FunctionId& caller, const FunctionId& callee) const {
    auto it = edges_.find({caller, callee});
    return it == edges_.end() ? nullptr : &it->second;
}

std::set<FunctionId> CallGraph::reachable_from_root() const {
    std::map<FunctionId, std::vector<const FunctionId*>> succ;
    for (const auto& [key, labels] : edges_) succ[key.first].push_back(&key.second);

    std::set<FunctionId> seen;
    std::deque<FunctionId> work;
    FunctionId root = FunctionId::global_root();
    if (!has_node(root)) return seen;
    seen.insert(root);
    work.push_back(root);
    while (!work.empty()) {
        FunctionId current = work.front();
        work.pop_front();
        auto it = succ.find(current);
        if (it == succ.end()) continue;
        for (const FunctionId* next : it->second) {
            if (seen.insert(*next).second) work.push_back(*next);
        }
    }
    return seen;
}

std::set<FunctionId> CallGraph::node_ids() const {
    std::set<FunctionId> ids;
    for (const auto& [id, node] : nodes_) ids.insert(id);
    return ids;
}

std::string serialize_graph(const CallGraph& graph) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& [id, node] : graph.nodes()) {
        nlohmann::ordered_json entry;
        entry["id"] = id.canonical();
        entry["kind"] = to_string(node.kind);
        if (node.name.empty())
            entry["name"] = nullptr;
        else
            entry["name"] = node.name;
        doc["nodes"].push_back(std::move(entry));
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [key, labels] : graph.edges()) {
        nlohmann::ordered_json entry;
        entry["caller"] = key.first.canonical();
        entry["callee"] = key.second.canonical();
        entry["labels"] = labels;
        doc["edges"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

CallGraph deserialize_graph(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("cg", std::string("malformed graph document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        throw Error("cg", "graph document must contain a nodes array");

    CallGraph graph;
    for (const auto& entry : doc["nodes"]) {
        if (!entry.contains("id") || !entry["id"].is_string())
            throw Error("cg", "node entry without string id");
        auto id = FunctionId::parse(entry["id"].get<std::string>());
        if (!id) throw Error("cg", "malformed node id " + entry["id"].dump());
        FunctionNode node;
        node.id = *id;
        node.kind = id->is_global() ? FunctionKind::Global : FunctionKind::Expression;
        if (entry.contains("kind") && entry["kind"].is_string()) {
            auto kind = function_kind_from_string(entry["kind"].get<std::string>());
            if (!kind) throw Error("cg", "unknown node kind " + entry["kind"].dump());
            node.kind = *kind;
        }
        if (entry.contains("name") && entry["name"].is_string()) node.name = entry["name"].get<std::string>();
        graph.add_node(node);
    }

    bool has_root = false;
    for (const auto& [id, node] : graph.nodes())
        if (node.kind == FunctionKind::Global) has_root = true;
    if (!has_root) throw Error("cg", "graph document lacks the global root node");

    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw Error("cg", "edges must be an array");
        for (const auto& entry : doc["edges"]) {
            if (!entry.contains("caller") || !entry.contains("callee"))
                throw Error("cg", "edge entry without endpoints");
            auto caller = FunctionId::parse(entry["caller"].get<std::string>());
            auto callee = FunctionId::parse(entry["callee"].get<std::string>());
            if (!caller || !callee) throw Error("cg", "malformed edge endpoint");
            if (!entry.contains("labels") || !entry["labels"].is_array() || entry["labels"].empty())
                throw Error("cg", "edge entry requires a non-empty labels array");
            for (const auto& label : entry["labels"])
                graph.add_edge(*caller, *callee, label.get<std::string>());
        }
    }
    return graph;
}

}  // namespace lacuna
