#include "lacuna/merge.hpp"

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/errors.hpp"

namespace lacuna {

CallGraph initial_graph(const AppInventory& inv) {
    CallGraph g;
    for (const FunctionInfo& f : inv.functions) g.add_node({f.id, f.kind, f.name});
    return g;
}

CallGraph merge_graphs(const CallGraph& g0,
                       const std::vector<std::pair<std::string, CallGraph>>& results) {
    CallGraph merged;
    for (const auto& [id, node] : g0.nodes()) merged.add_node(node);

    for (const auto& [name, g] : results) {
        if (g.node_ids() != g0.node_ids())
            throw Error("merge", "analyzer '" + name + "' returned a different node set");
        for (const auto& [key, labels] : g.edges())
            for (const std::string& label : labels) merged.add_edge(key.first, key.second, label);
    }
    return merged;
}

}  // namespace lacuna
