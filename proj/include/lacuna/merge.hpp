#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lacuna/cg.hpp"

namespace lacuna {

// Joins per-analyzer graphs: node set stays the initial one, edges union,
// labels union. A result whose node set differs from g0's is an error naming
// that analyzer.
CallGraph merge_graphs(const CallGraph& g0,
                       const std::vector<std::pair<std::string, CallGraph>>& results);

}  // namespace lacuna
