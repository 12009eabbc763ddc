#include "lacuna/pipeline.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <future>
#include <set>

#include "lacuna/fsutil.hpp"
#include "lacuna/merge.hpp"
#include "lacuna/subprocess.hpp"

namespace lacuna {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kBuiltins = {"static", "acg", "native-calls", "dynamic"};

bool wants_dynamic(const std::vector<AnalyzerSpec>& specs) {
    for (const AnalyzerSpec& s : specs)
        if (!s.is_external() && s.name == "dynamic") return true;
    return false;
}

void validate_specs(const std::vector<AnalyzerSpec>& specs) {
    std::set<std::string> names;
    for (const AnalyzerSpec& s : specs) {
        if (s.name.empty()) throw Error("config", "analyzer with an empty name");
        if (!s.is_external() && !kBuiltins.count(s.name))
            throw Error("config", "unknown analyzer '" + s.name + "'");
        if (!names.insert(s.name).second)
            throw Error("config", "analyzer '" + s.name + "' requested twice");
    }
}

std::string app_label(const fs::path& root) {
    fs::path p = root.lexically_normal();
    std::string name = p.filename().string();
    if (name.empty() || name == ".") name = p.parent_path().filename().string();
    return name.empty() ? p.string() : name;
}

std::string trimmed(std::string text, size_t limit) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    if (text.size() > limit) text = text.substr(0, limit) + "...";
    return text;
}

fs::path scratch_dir(const char* tag) {
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    return fs::temp_directory_path() /
           (std::string("lacuna-") + tag + "-" + std::to_string(getpid()) + "-" +
            std::to_string(stamp));
}

// Shared analyze phase: discovery through classification.
void run_core(const PipelineOptions& opts, PipelineResult& res) {
    res.inventory = discover_app(opts.app_root, {true, opts.timeout_seconds});
    res.diagnostics = res.inventory.diagnostics;
    res.g0 = initial_graph(res.inventory);

    std::string trace;
    if (wants_dynamic(opts.analyzers)) trace = obtain_trace(res.inventory, opts, res.diagnostics);
    res.runs = run_analyzers(res.inventory, res.g0, opts.analyzers, trace, opts.timeout_seconds,
                             opts.natives, res.diagnostics);

    std::vector<std::pair<std::string, CallGraph>> ok;
    for (const AnalyzerRun& run : res.runs)
        if (run.ok) ok.emplace_back(run.name, run.graph);
    if (ok.empty()) throw Error("pipeline", "every analyzer failed");

    res.merged = merge_graphs(res.g0, ok);
    res.plan = classify(res.merged);
    res.report_json = render_report(app_label(opts.app_root), res.merged, res.plan, opts.level);
}

}  // namespace

void validate_options(const PipelineOptions& opts, bool needs_out, bool needs_analyzers) {
    if (opts.app_root.empty()) throw Error("config", "no app directory given");
    if (!fs::is_directory(opts.app_root))
        throw Error("config", "app root is not a directory: " + opts.app_root.string());
    if (needs_out) {
        if (opts.out_dir.empty()) throw Error("config", "no output directory given");
        if (fsutil::is_within(opts.app_root, opts.out_dir))
            throw Error("config", "output directory must lie outside the app root");
    }
    if (needs_analyzers) {
        if (opts.analyzers.empty()) throw Error("config", "at least one analyzer is required");
        validate_specs(opts.analyzers);
        if (wants_dynamic(opts.analyzers) && opts.trace_path.empty() &&
            opts.runner_command.empty())
            throw Error("config", "the dynamic analyzer needs --trace or --runner");
    }
    if (!opts.trace_path.empty() && !fs::is_regular_file(opts.trace_path))
        throw Error("config", "trace file not found: " + opts.trace_path);
    if (opts.lazy_port < 1 || opts.lazy_port > 65535)
        throw Error("config", "lazy-load port out of range");
    if (opts.timeout_seconds < 1) throw Error("config", "timeout must be positive");
}

std::vector<AnalyzerRun> run_analyzers(const AppInventory& inv, const CallGraph& g0,
                                       const std::vector<AnalyzerSpec>& specs,
                                       const std::string& trace_text, int timeout_seconds,
                                       const NativeTable& natives, DiagnosticList& diags) {
    const NativeTable table = natives.empty() ? default_native_table() : natives;
    std::vector<AnalyzerRun> runs(specs.size());
    std::vector<DiagnosticList> local(specs.size());
    std::vector<std::future<void>> futures;
    futures.reserve(specs.size());

    for (size_t i = 0; i < specs.size(); ++i) {
        runs[i].name = specs[i].name;
        futures.push_back(std::async(std::launch::async, [&, i]() {
            const AnalyzerSpec& spec = specs[i];
            try {
                if (spec.is_external())
                    runs[i].graph =
                        analyze_external(inv, g0, spec.name, spec.external_command, timeout_seconds);
                else if (spec.name == "static")
                    runs[i].graph = analyze_static(inv, g0);
                else if (spec.name == "acg")
                    runs[i].graph = analyze_acg(inv, g0);
                else if (spec.name == "native-calls")
                    runs[i].graph = analyze_native_calls(inv, g0, table);
                else if (spec.name == "dynamic")
                    runs[i].graph = analyze_dynamic(inv, g0, trace_text, local[i]);
                else
                    throw Error("config", "unknown analyzer '" + spec.name + "'");
                runs[i].ok = true;
            } catch (const std::exception& e) {
                runs[i].ok = false;
                runs[i].error = e.what();
            }
        }));
    }
    for (auto& f : futures) f.get();

    for (size_t i = 0; i < specs.size(); ++i) {
        diags.insert(diags.end(), local[i].begin(), local[i].end());
        if (!runs[i].ok)
            diags.push_back({"analyzer:" + runs[i].name, "failed, ensemble degrades: " + runs[i].error});
    }
    return runs;
}

std::string obtain_trace(const AppInventory& inv, const PipelineOptions& opts,
                         DiagnosticList& diags) {
    if (!opts.trace_path.empty()) return fsutil::read_file(opts.trace_path);
    if (opts.runner_command.empty()) return "";

    fs::path scratch = scratch_dir("run");
    fs::path app_copy = scratch / "app";
    fs::path trace_file = scratch / "trace.txt";
    try {
        write_instrumented_app(inv, app_copy);
        ProcessResult pr =
            run_command(opts.runner_command, {app_copy.string(), trace_file.string()},
                        opts.timeout_seconds, {{"LACUNA_TRACE", trace_file.string()}});
        if (pr.timed_out)
            throw Error("pipeline", "runner timed out after " +
                                        std::to_string(opts.timeout_seconds) + "s");
        if (pr.exit_code != 0)
            throw Error("pipeline", "runner exited with " + std::to_string(pr.exit_code) +
                                        (pr.err.empty() ? "" : ": " + trimmed(pr.err, 400)));
        std::string text;
        if (fs::is_regular_file(trace_file)) text = fsutil::read_file(trace_file);
        if (text.empty()) diags.push_back({"runner", "produced an empty trace"});
        std::error_code ec;
        fs::remove_all(scratch, ec);
        return text;
    } catch (...) {
        std::error_code ec;
        fs::remove_all(scratch, ec);
        throw;
    }
}

PipelineResult run_analysis(const PipelineOptions& opts) {
    validate_options(opts, false, true);
    uint64_t before = fsutil::hash_tree(opts.app_root);
    PipelineResult res;
    run_core(opts, res);
    if (!opts.emit_graph_path.empty())
        fsutil::write_file(opts.emit_graph_path, serialize_graph(res.merged));
    if (fsutil::hash_tree(opts.app_root) != before)
        throw Error("pipeline", "input tree was modified during analysis");
    return res;
}

PipelineResult run_optimize(const PipelineOptions& opts) {
    validate_options(opts, true, true);
    uint64_t before = fsutil::hash_tree(opts.app_root);
    PipelineResult res;
    run_core(opts, res);

    plan_actions(res.plan, res.inventory, opts.level);
    rewrite_app(res.inventory, res.plan, opts.level, opts.out_dir, opts.lazy_port);

    fs::path report = opts.report_path.empty() ? opts.out_dir / "_lacuna_report.json"
                                               : fs::path(opts.report_path);
    fsutil::write_file(report, res.report_json);
    if (!opts.emit_graph_path.empty())
        fsutil::write_file(opts.emit_graph_path, serialize_graph(res.merged));

    if (fsutil::hash_tree(opts.app_root) != before)
        throw Error("pipeline", "input tree was modified during optimization");
    return res;
}

AppInventory run_instrument(const PipelineOptions& opts) {
    validate_options(opts, true, false);
    uint64_t before = fsutil::hash_tree(opts.app_root);
    AppInventory inv = discover_app(opts.app_root, {true, opts.timeout_seconds});
    write_instrumented_app(inv, opts.out_dir);
    if (fsutil::hash_tree(opts.app_root) != before)
        throw Error("pipeline", "input tree was modified during instrumentation");
    return inv;
}

CorpusOutcome run_corpus(const std::filesystem::path& corpus_dir,
                         const std::vector<AnalyzerSpec>& specs, bool sweep_combinations,
                         const PipelineOptions& base) {
    if (!fs::is_directory(corpus_dir))
        throw Error("config", "corpus root is not a directory: " + corpus_dir.string());
    if (specs.empty()) throw Error("config", "at least one analyzer is required");
    validate_specs(specs);
    uint64_t before = fsutil::hash_tree(corpus_dir);

    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(corpus_dir))
        if (e.is_directory() && fs::is_regular_file(e.path() / "truth.json"))
            entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());
    if (entries.empty())
        throw Error("config", "no corpus entries (directories with truth.json) under " +
                                  corpus_dir.string());

    CorpusOutcome out;
    for (const fs::path& entry : entries) {
        std::string name = entry.filename().string();
        try {
            fs::path app_dir = entry / "app";
            if (!fs::is_directory(app_dir))
                throw Error("eval", "corpus entry has no app/ directory");
            AppInventory inv = discover_app(app_dir, {true, base.timeout_seconds});
            for (const Diagnostic& d : inv.diagnostics)
                out.diagnostics.push_back({name + ":" + d.subject, d.message});
            CallGraph g0 = initial_graph(inv);

            std::set<FunctionId> universe = g0.node_ids();
            universe.erase(FunctionId::global_root());
            GroundTruth truth =
                load_truth(fsutil::read_file(entry / "truth.json"), universe, name);

            fs::path trace_file = entry / "trace.txt";
            std::string trace;
            bool have_trace = fs::is_regular_file(trace_file);
            if (have_trace) trace = fsutil::read_file(trace_file);

            DiagnosticList local;
            std::vector<AnalyzerRun> runs = run_analyzers(inv, g0, specs, trace,
                                                          base.timeout_seconds, base.natives, local);
            if (wants_dynamic(specs) && !have_trace) {
                for (AnalyzerRun& run : runs)
                    if (run.name == "dynamic") {
                        run.ok = false;
                        run.error = "no recorded trace.txt for this corpus entry";
                        local.push_back({"analyzer:dynamic", run.error});
                    }
            }
            for (const Diagnostic& d : local)
                out.diagnostics.push_back({name + ":" + d.subject, d.message});

            if (sweep_combinations) {
                std::vector<EvalReport> rows = sweep(truth.app, g0, runs, truth, out.diagnostics);
                out.rows.insert(out.rows.end(), rows.begin(), rows.end());
            } else {
                std::vector<std::string> names;
                std::vector<std::pair<std::string, CallGraph>> ok;
                for (const AnalyzerRun& run : runs)
                    if (run.ok) {
                        names.push_back(run.name);
                        ok.emplace_back(run.name, run.graph);
                    }
                if (ok.empty()) throw Error("eval", "every analyzer failed");
                CallGraph merged = merge_graphs(g0, ok);
                EliminationPlan plan = classify(merged);
                out.rows.push_back(score(truth.app, names, plan.dead, truth));
            }
        } catch (const std::exception& e) {
            out.diagnostics.push_back({name, e.what()});
        }
    }
    out.aggregated = aggregate(out.rows);
    if (fsutil::hash_tree(corpus_dir) != before)
        throw Error("pipeline", "corpus tree was modified during evaluation");
    return out;
}

}  // namespace lacuna
