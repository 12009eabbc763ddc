#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/eliminate.hpp"
#include "lacuna/evaluate.hpp"
#include "lacuna/sources.hpp"

namespace lacuna {

// One requested analyzer: a built-in name (static, acg, native-calls,
// dynamic) or an external adapter with its command line.
struct AnalyzerSpec {
    std::string name;
    std::string external_command;  // empty for built-ins

    bool is_external() const { return !external_command.empty(); }
};

struct PipelineOptions {
    std::filesystem::path app_root;
    std::filesystem::path out_dir;
    OptLevel level = OptLevel::OL0;
    std::vector<AnalyzerSpec> analyzers;
    std::string trace_path;      // recorded trace for the dynamic analyzer
    std::string runner_command;  // fallback: instrument a copy and run this
    int lazy_port = 8125;
    std::string emit_graph_path;
    std::string report_path;  // optimize default: <out>/_lacuna_report.json
    int timeout_seconds = 30;
    NativeTable natives;  // empty = use the built-in table
};

struct PipelineResult {
    AppInventory inventory;
    CallGraph g0;
    std::vector<AnalyzerRun> runs;
    CallGraph merged;
    EliminationPlan plan;
    std::string report_json;
    DiagnosticList diagnostics;
};

// Config validation shared by the commands. Throws Error("config") on bad
// input; those surface as usage errors, every other module as a pipeline
// failure.
void validate_options(const PipelineOptions& opts, bool needs_out, bool needs_analyzers);

// Runs every requested analyzer over the inventory, built-ins in parallel.
// A failing analyzer yields ok=false with its error text; the caller decides
// whether that degrades or aborts. The dynamic analyzer takes its trace from
// `trace_text`.
std::vector<AnalyzerRun> run_analyzers(const AppInventory& inv, const CallGraph& g0,
                                       const std::vector<AnalyzerSpec>& specs,
                                       const std::string& trace_text, int timeout_seconds,
                                       const NativeTable& natives, DiagnosticList& diags);

// Obtains the dynamic analyzer's trace: reads opts.trace_path when given,
// otherwise instruments a copy of the app into a scratch directory and runs
// opts.runner_command over it.
std::string obtain_trace(const AppInventory& inv, const PipelineOptions& opts,
                         DiagnosticList& diags);

// analyze: discover, run analyzers, merge, classify. No rewriting.
PipelineResult run_analysis(const PipelineOptions& opts);

// optimize: run_analysis plus action planning, the rewritten copy, the body
// store (OL1), and the report file.
PipelineResult run_optimize(const PipelineOptions& opts);

// instrument: probe-laden copy of the app under opts.out_dir.
AppInventory run_instrument(const PipelineOptions& opts);

struct CorpusOutcome {
    std::vector<EvalReport> rows;        // per app
    std::vector<EvalReport> aggregated;  // across apps, per combination
    DiagnosticList diagnostics;
};

// eval: every corpus entry (a directory holding app/ and truth.json, plus
// trace.txt when the dynamic analyzer is in play) is analyzed and scored.
// With sweep, all 2^n - 1 analyzer combinations per app; without, one row
// per app for the requested ensemble. Per-app failures become diagnostics.
CorpusOutcome run_corpus(const std::filesystem::path& corpus_dir,
                         const std::vector<AnalyzerSpec>& specs, bool sweep_combinations,
                         const PipelineOptions& base);

}  // namespace lacuna
