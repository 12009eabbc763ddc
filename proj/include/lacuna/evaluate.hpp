#pragma once

#include <set>
#include <string>
#include <vector>

#include "lacuna/cg.hpp"
#include "lacuna/errors.hpp"

namespace lacuna {

// Hand-labeled dead/alive split for one app. `dead` and `alive` are disjoint
// and together cover exactly the app's parsed function set.
struct GroundTruth {
    std::string app;
    std::set<FunctionId> dead;
    std::set<FunctionId> alive;
};

// Parses and validates a ground-truth document against the app's function
// universe (all parsed function ids, root excluded). Duplicate entries,
// unknown ids, and uncovered functions are hard errors. Empty text yields an
// empty truth for an empty universe.
GroundTruth load_truth(const std::string& json_text, const std::set<FunctionId>& universe,
                       const std::string& app_fallback = "");

struct EvalReport {
    std::string app;
    std::vector<std::string> combination;  // analyzer names, sorted
    size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0;
    double recall = 0;
    double f_score = 0;
    // Degenerate-case markers: no detections against a non-empty dead set
    // leaves precision without a defining ratio; precision+recall of zero
    // leaves the F-score without one.
    bool undefined_precision = false;
    bool undefined_f = false;

    std::string combination_name() const;
};

// Scores a detected-dead set against the truth. Detected ids must lie inside
// the truth universe.
EvalReport score(const std::string& app, const std::vector<std::string>& combination,
                 const std::set<FunctionId>& detected_dead, const GroundTruth& truth);

// One analyzer's result over an app, as input to a sweep.
struct AnalyzerRun {
    std::string name;
    bool ok = false;
    CallGraph graph;
    std::string error;
};

// Scores every non-empty subset of the runs (2^n - 1 combinations): merge,
// classify by reachability, score. Combinations containing a failed analyzer
// are skipped with a diagnostic. Results sort by f_score descending, then
// precision descending, then combination name.
std::vector<EvalReport> sweep(const std::string& app, const CallGraph& g0,
                              const std::vector<AnalyzerRun>& runs, const GroundTruth& truth,
                              DiagnosticList& diags);

// Unweighted mean of per-app metrics, grouped by combination; counts are
// summed. Aggregate rows carry app = "<aggregate>".
std::vector<EvalReport> aggregate(const std::vector<EvalReport>& rows);

std::string render_reports_json(const std::vector<EvalReport>& rows);
std::string render_table(const std::vector<EvalReport>& rows);

}  // namespace lacuna
