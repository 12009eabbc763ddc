#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lacuna/errors.hpp"
#include "lacuna/evaluate.hpp"
#include "lacuna/lazyload.hpp"
#include "lacuna/pipeline.hpp"

namespace py = pybind11;

namespace {

using namespace lacuna;

std::vector<AnalyzerSpec> to_specs(const std::vector<std::string>& names) {
    std::vector<AnalyzerSpec> specs;
    for (const std::string& name : names) {
        size_t colon = name.find(':');
        if (colon == std::string::npos)
            specs.push_back({name, ""});
        else
            specs.push_back({name.substr(0, colon), name.substr(colon + 1)});
    }
    return specs;
}

py::dict graph_dict(const CallGraph& g) {
    py::list nodes;
    for (const auto& [id, node] : g.nodes()) {
        py::dict entry;
        entry["id"] = id.canonical();
        entry["kind"] = to_string(node.kind);
        entry["name"] = node.name.empty() ? py::object(py::none()) : py::object(py::str(node.name));
        nodes.append(entry);
    }
    py::list edges;
    for (const auto& [key, labels] : g.edges()) {
        py::dict entry;
        entry["caller"] = key.first.canonical();
        entry["callee"] = key.second.canonical();
        entry["labels"] = std::vector<std::string>(labels.begin(), labels.end());
        edges.append(entry);
    }
    py::dict out;
    out["nodes"] = nodes;
    out["edges"] = edges;
    return out;
}

py::list id_list(const std::set<FunctionId>& ids) {
    py::list out;
    for (const FunctionId& id : ids) out.append(id.canonical());
    return out;
}

py::list diag_list(const DiagnosticList& diags) {
    py::list out;
    for (const Diagnostic& d : diags) {
        py::dict entry;
        entry["subject"] = d.subject;
        entry["message"] = d.message;
        out.append(entry);
    }
    return out;
}

PipelineOptions build_options(const std::string& app, const std::string& out_dir, int level,
                              const std::vector<std::string>& analyzers, const std::string& trace,
                              const std::string& runner, int lazy_port, int timeout) {
    PipelineOptions opts;
    opts.app_root = app;
    opts.out_dir = out_dir;
    auto lv = olevel_from_int(level);
    if (!lv) throw Error("config", "optimization level must be 0..3");
    opts.level = *lv;
    opts.analyzers = to_specs(analyzers);
    opts.trace_path = trace;
    opts.runner_command = runner;
    opts.lazy_port = lazy_port;
    opts.timeout_seconds = timeout;
    return opts;
}

py::dict result_dict(const PipelineResult& res) {
    py::dict out;
    out["graph"] = graph_dict(res.merged);
    out["alive"] = id_list(res.plan.alive);
    out["dead"] = id_list(res.plan.dead);
    out["actions"] = id_list(res.plan.actions);
    out["report_json"] = res.report_json;
    out["diagnostics"] = diag_list(res.diagnostics);
    return out;
}

py::dict report_dict(const EvalReport& r) {
    py::dict out;
    out["app"] = r.app;
    out["combination"] = r.combination;
    out["tp"] = r.tp;
    out["fp"] = r.fp;
    out["fn"] = r.fn;
    out["tn"] = r.tn;
    out["precision"] = r.precision;
    out["recall"] = r.recall;
    out["f_score"] = r.f_score;
    out["undefined_precision"] = r.undefined_precision;
    out["undefined_f"] = r.undefined_f;
    return out;
}

std::set<FunctionId> parse_ids(const std::vector<std::string>& raw, const char* what) {
    std::set<FunctionId> out;
    for (const std::string& text : raw) {
        auto id = FunctionId::parse(text);
        if (!id) throw Error("eval", std::string("malformed ") + what + " id: " + text);
        out.insert(*id);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(lacuna, m) {
    m.doc() = "Dead function identification and elimination for JavaScript apps";

    py::register_exception<Error>(m, "LacunaError");

    m.def(
        "discover",
        [](const std::string& app) {
            AppInventory inv = discover_app(app);
            py::list functions;
            for (const FunctionInfo& f : inv.functions) {
                py::dict entry;
                entry["id"] = f.id.canonical();
                entry["kind"] = to_string(f.kind);
                entry["name"] =
                    f.name.empty() ? py::object(py::none()) : py::object(py::str(f.name));
                functions.append(entry);
            }
            py::list sources;
            for (const SourceFile& src : inv.sources) sources.append(src.app_path);
            py::dict out;
            out["functions"] = functions;
            out["sources"] = sources;
            out["diagnostics"] = diag_list(inv.diagnostics);
            return out;
        },
        py::arg("app"), "Parse an app directory and list its functions");

    m.def(
        "analyze",
        [](const std::string& app, const std::vector<std::string>& analyzers,
           const std::string& trace, int timeout) {
            PipelineOptions opts =
                build_options(app, "", 0, analyzers, trace, "", kDefaultLazyPort, timeout);
            return result_dict(run_analysis(opts));
        },
        py::arg("app"), py::arg("analyzers") = std::vector<std::string>{"static", "acg", "native-calls"},
        py::arg("trace") = "", py::arg("timeout") = 30,
        "Build the merged call graph and classify functions");

    m.def(
        "optimize",
        [](const std::string& app, const std::string& out, int level,
           const std::vector<std::string>& analyzers, const std::string& trace,
           const std::string& runner, int lazy_port, int timeout) {
            PipelineOptions opts =
                build_options(app, out, level, analyzers, trace, runner, lazy_port, timeout);
            return result_dict(run_optimize(opts));
        },
        py::arg("app"), py::arg("out"), py::arg("level") = 0,
        py::arg("analyzers") = std::vector<std::string>{"static", "acg", "native-calls"},
        py::arg("trace") = "", py::arg("runner") = "", py::arg("lazy_port") = kDefaultLazyPort,
        py::arg("timeout") = 30, "Write an optimized copy of the app");

    m.def(
        "instrument",
        [](const std::string& app, const std::string& out) {
            PipelineOptions opts;
            opts.app_root = app;
            opts.out_dir = out;
            AppInventory inv = run_instrument(opts);
            return inv.functions.size() - 1;
        },
        py::arg("app"), py::arg("out"),
        "Write an instrumented copy; returns the probed function count");

    m.def(
        "score",
        [](const std::vector<std::string>& detected, const std::vector<std::string>& dead,
           const std::vector<std::string>& alive, const std::string& app) {
            GroundTruth truth;
            truth.app = app;
            truth.dead = parse_ids(dead, "truth");
            truth.alive = parse_ids(alive, "truth");
            EvalReport r = score(app, {"detector"}, parse_ids(detected, "detected"), truth);
            return report_dict(r);
        },
        py::arg("detected"), py::arg("dead"), py::arg("alive"), py::arg("app") = "",
        "Precision/recall/F of a detected-dead set against a labeled split");

    m.def(
        "eval_corpus",
        [](const std::string& corpus, const std::vector<std::string>& analyzers, bool sweep,
           int timeout) {
            PipelineOptions base;
            base.timeout_seconds = timeout;
            CorpusOutcome outcome = run_corpus(corpus, to_specs(analyzers), sweep, base);
            py::dict out;
            py::list rows;
            for (const EvalReport& r : outcome.rows) rows.append(report_dict(r));
            py::list agg;
            for (const EvalReport& r : outcome.aggregated) agg.append(report_dict(r));
            out["rows"] = rows;
            out["aggregate"] = agg;
            out["diagnostics"] = diag_list(outcome.diagnostics);
            return out;
        },
        py::arg("corpus"), py::arg("analyzers") = std::vector<std::string>{"static", "acg", "native-calls"},
        py::arg("sweep") = false, py::arg("timeout") = 30,
        "Score analyzers against every ground-truthed app in a corpus directory");
}
