#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "lacuna/cg.hpp"
#include "lacuna/sources.hpp"

namespace lacuna {

enum class OptLevel { OL0 = 0, OL1 = 1, OL2 = 2, OL3 = 3 };

const char* to_string(OptLevel level);
std::optional<OptLevel> olevel_from_int(int level);

struct EliminationPlan {
    std::set<FunctionId> alive;  // global root excluded
    std::set<FunctionId> dead;
    // Rewrite targets: the outermost dead spans that neither contain nor sit
    // inside an alive span. Empty at OL0.
    std::set<FunctionId> actions;
};

// Splits the merged graph's function nodes by reachability from the root.
EliminationPlan classify(const CallGraph& gw);

// Fills plan.actions for the level.
void plan_actions(EliminationPlan& plan, const AppInventory& inv, OptLevel level);

// Writes the optimized copy under `out`: OL0 copies bytes untouched, OL1
// stubs bodies against the lazy-load server on `lazy_port` and exports them
// to <out>/_lacuna_bodies/, OL2 empties bodies, OL3 removes functions and
// nulls dangling references. Every rewritten script is re-parsed; failure
// aborts naming the script.
void rewrite_app(const AppInventory& inv, const EliminationPlan& plan, OptLevel level,
                 const std::filesystem::path& out, int lazy_port);

// The dead/alive report consumed by tooling and tests.
std::string render_report(const std::string& app_label, const CallGraph& gw,
                          const EliminationPlan& plan, OptLevel level);

}  // namespace lacuna
