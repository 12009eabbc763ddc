#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lacuna {

// One JavaScript function occurrence, keyed by file and byte span. The
// synthetic global-scope root uses the reserved file "<global>" with an
// empty span. Canonical text form: "<file>[<start>:<end>]".
struct FunctionId {
    std::string file;
    uint32_t start = 0;
    uint32_t end = 0;

    auto operator<=>(const FunctionId&) const = default;

    bool is_global() const { return file == kGlobalFile && start == 0 && end == 0; }

    std::string canonical() const;

    static FunctionId global_root() { return {std::string(kGlobalFile), 0, 0}; }

    // Parses "<file>[s:e]". Returns nullopt on malformed input.
    static std::optional<FunctionId> parse(const std::string& text);

    static constexpr const char* kGlobalFile = "<global>";
};

enum class FunctionKind {
    Global,
    Declaration,
    Expression,
    Arrow,
    Method,
    InlineHtml,
};

const char* to_string(FunctionKind kind);
std::optional<FunctionKind> function_kind_from_string(const std::string& text);

struct FunctionNode {
    FunctionId id;
    FunctionKind kind = FunctionKind::Expression;
    std::string name;  // empty when anonymous

    bool operator==(const FunctionNode&) const = default;
};

struct CallEdge {
    FunctionId caller;
    FunctionId callee;
    std::set<std::string> labels;

    bool operator==(const CallEdge&) const = default;
};

// Directed call graph with one global root. Nodes and edges are kept in
// ordered containers so iteration (and serialization) is deterministic.
class CallGraph {
public:
    using EdgeKey = std::pair<FunctionId, FunctionId>;

    CallGraph() = default;

    // Builds a graph containing just the global root.
    static CallGraph with_root();

    void add_node(const FunctionNode& node);
    bool has_node(const FunctionId& id) const { return nodes_.count(id) != 0; }
    const FunctionNode* find_node(const FunctionId& id) const;

    // Accumulates `analyzer` into the (caller, callee) edge's label set,
    // creating the edge on first sight. Throws Error if either endpoint is
    // missing from the node set: that signals an analyzer emitted an id the
    // parser never produced.
    void add_edge(const FunctionId& caller, const FunctionId& callee, const std::string& analyzer);

    const std::map<FunctionId, FunctionNode>& nodes() const { return nodes_; }
    const std::map<EdgeKey, std::set<std::string>>& edges() const { return edges_; }

    size_t node_count() const { return nodes_.size(); }
    size_t edge_count() const { return edges_.size(); }

    const std::set<std::string>* edge_labels(const FunctionId& caller, const FunctionId& callee) const;

    // Nodes reachable from the global root following caller->callee edges.
    // Always contains the root itself.
    std::set<FunctionId> reachable_from_root() const;

    std::set<FunctionId> node_ids() const;

    bool operator==(const CallGraph&) const = default;

private:
    std::map<FunctionId, FunctionNode> nodes_;
    std::map<EdgeKey, std::set<std::string>> edges_;
};

// JSON exchange format shared with external analyzers, `--emit-graph`, and
// the evaluation harness:
//   {"nodes":[{"id":"f[s:e]","kind":"...","name":"..."|null}],
//    "edges":[{"caller":"...","callee":"...","labels":["..."]}]}
std::string serialize_graph(const CallGraph& graph);
CallGraph deserialize_graph(const std::string& json_text);

}  // namespace lacuna
