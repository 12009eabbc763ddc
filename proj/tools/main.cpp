#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "lacuna/errors.hpp"
#include "lacuna/fsutil.hpp"
#include "lacuna/lazyload.hpp"
#include "lacuna/pipeline.hpp"

namespace {

using lacuna::Error;

struct CliState {
    std::string app;
    std::string out;
    int olevel = 0;
    std::vector<std::string> analyzers;
    std::vector<std::string> externals;
    std::string trace;
    std::string runner;
    int lazy_port = lacuna::kDefaultLazyPort;
    std::string emit_graph;
    std::string report;
    int timeout = 30;
    bool sweep = false;
    lacuna::NativeTable natives;
};

// Option handles for one subcommand, so the config file can fill in only the
// flags the command line left untouched.
struct FlagSet {
    CLI::Option* out = nullptr;
    CLI::Option* olevel = nullptr;
    CLI::Option* analyzer = nullptr;
    CLI::Option* external = nullptr;
    CLI::Option* trace = nullptr;
    CLI::Option* runner = nullptr;
    CLI::Option* lazy_port = nullptr;
    CLI::Option* emit_graph = nullptr;
    CLI::Option* report = nullptr;
    CLI::Option* timeout = nullptr;
    CLI::Option* sweep = nullptr;
};

bool unset(CLI::Option* opt) { return opt == nullptr || opt->count() == 0; }

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t next = text.find(sep, pos);
        if (next == std::string::npos) next = text.size();
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

std::string trim(const std::string& text) {
    size_t a = text.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = text.find_last_not_of(" \t\r\n");
    return text.substr(a, b - a + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                          (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

int to_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        int n = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return n;
    } catch (const std::exception&) {
        throw Error("config", "config key '" + key + "' is not a number: " + value);
    }
}

// lacuna.toml in the app root: `key = value` lines, # comments. Flags given
// on the command line win over the file; the file wins over defaults.
void apply_config(const std::filesystem::path& path, CliState& st, const FlagSet& fs) {
    std::string text = lacuna::fsutil::read_file(path);
    std::vector<std::string> config_analyzers;
    std::vector<std::string> config_externals;
    bool saw_analyzer = false;

    for (const std::string& raw : split(text, '\n')) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config", path.string() + ": expected key = value, got: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = unquote(trim(line.substr(eq + 1)));

        if (key == "out") {
            if (unset(fs.out)) st.out = value;
        } else if (key == "olevel") {
            if (unset(fs.olevel)) st.olevel = to_int(key, value);
        } else if (key == "analyzer") {
            saw_analyzer = true;
            for (const std::string& name : split(value, ','))
                if (!trim(name).empty()) config_analyzers.push_back(trim(name));
        } else if (key == "external") {
            config_externals.push_back(value);
        } else if (key == "trace") {
            if (unset(fs.trace)) st.trace = value;
        } else if (key == "runner") {
            if (unset(fs.runner)) st.runner = value;
        } else if (key == "lazy_port") {
            if (unset(fs.lazy_port)) st.lazy_port = to_int(key, value);
        } else if (key == "emit_graph") {
            if (unset(fs.emit_graph)) st.emit_graph = value;
        } else if (key == "report") {
            if (unset(fs.report)) st.report = value;
        } else if (key == "timeout") {
            if (unset(fs.timeout)) st.timeout = to_int(key, value);
        } else if (key == "sweep") {
            if (unset(fs.sweep)) st.sweep = (value == "true" || value == "1");
        } else if (key == "natives") {
            std::filesystem::path p = value;
            if (p.is_relative()) p = path.parent_path() / p;
            st.natives = lacuna::parse_native_table(lacuna::fsutil::read_file(p));
        } else {
            throw Error("config", path.string() + ": unknown config key '" + key + "'");
        }
    }
    if (saw_analyzer && unset(fs.analyzer)) st.analyzers = config_analyzers;
    if (!config_externals.empty() && unset(fs.external)) st.externals = config_externals;
}

lacuna::PipelineOptions make_options(const CliState& st) {
    lacuna::PipelineOptions opts;
    opts.app_root = st.app;
    opts.out_dir = st.out;
    auto level = lacuna::olevel_from_int(st.olevel);
    if (!level) throw Error("config", "optimization level must be 0..3");
    opts.level = *level;
    for (const std::string& name : st.analyzers) opts.analyzers.push_back({name, ""});
    for (const std::string& ext : st.externals) {
        size_t colon = ext.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == ext.size())
            throw Error("config", "--external wants \"<name>:<command>\", got: " + ext);
        opts.analyzers.push_back({trim(ext.substr(0, colon)), trim(ext.substr(colon + 1))});
    }
    opts.trace_path = st.trace;
    opts.runner_command = st.runner;
    opts.lazy_port = st.lazy_port;
    opts.emit_graph_path = st.emit_graph;
    opts.report_path = st.report;
    opts.timeout_seconds = st.timeout;
    opts.natives = st.natives;
    return opts;
}

void print_warnings(const lacuna::DiagnosticList& diags) {
    for (const lacuna::Diagnostic& d : diags)
        std::fprintf(stderr, "warning: %s: %s\n", d.subject.c_str(), d.message.c_str());
}

void print_runs(const std::vector<lacuna::AnalyzerRun>& runs) {
    std::string line = "analyzers:";
    for (const lacuna::AnalyzerRun& run : runs) {
        line += " " + run.name;
        line += run.ok ? " ok (" + std::to_string(run.graph.edge_count()) + " edges)" : " FAILED";
    }
    std::printf("%s\n", line.c_str());
}

void add_common(CLI::App* cmd, CliState& st, FlagSet& fs, bool with_out, bool with_level) {
    cmd->add_option("--app", st.app, "App directory")->required();
    if (with_out) fs.out = cmd->add_option("--out", st.out, "Output directory");
    if (with_level)
        fs.olevel = cmd->add_option("--olevel", st.olevel, "Optimization level 0..3");
    fs.analyzer = cmd->add_option("--analyzer", st.analyzers,
                                  "Analyzers: static, acg, native-calls, dynamic")
                      ->delimiter(',');
    fs.external =
        cmd->add_option("--external", st.externals, "External analyzer as \"<name>:<command>\"");
    fs.trace = cmd->add_option("--trace", st.trace, "Recorded trace file for the dynamic analyzer");
    fs.runner = cmd->add_option("--runner", st.runner,
                                "Command run as `<cmd> <instrumented-app> <trace-file>`");
    fs.lazy_port = cmd->add_option("--lazy-port", st.lazy_port, "Lazy-load server port");
    fs.emit_graph = cmd->add_option("--emit-graph", st.emit_graph, "Write the merged graph here");
    fs.report = cmd->add_option("--report", st.report, "Report path");
    fs.timeout = cmd->add_option("--timeout", st.timeout, "Per-analyzer timeout, seconds");
}

int run(int argc, char** argv) {
    CLI::App app{"lacuna: finds dead functions in JavaScript apps and removes them"};
    app.require_subcommand(1);
    CliState st;

    FlagSet fs_optimize, fs_analyze, fs_serve, fs_eval, fs_instrument;
    CLI::App* optimize = app.add_subcommand("optimize", "Analyze and write an optimized copy");
    add_common(optimize, st, fs_optimize, true, true);

    CLI::App* analyze = app.add_subcommand("analyze", "Analyze only; emit graph and report");
    add_common(analyze, st, fs_analyze, false, false);

    CLI::App* serve = app.add_subcommand("serve", "Serve exported function bodies over HTTP");
    serve->add_option("--app", st.app, "Optimized app (or body store) directory")->required();
    fs_serve.lazy_port = serve->add_option("--lazy-port", st.lazy_port, "Port to bind");

    CLI::App* eval = app.add_subcommand("eval", "Score analyzers against ground truth");
    eval->add_option("--app", st.app, "Corpus root (entries hold app/ and truth.json)")
        ->required();
    fs_eval.analyzer = eval->add_option("--analyzer", st.analyzers, "Analyzers")->delimiter(',');
    fs_eval.external = eval->add_option("--external", st.externals, "External analyzer");
    fs_eval.sweep = eval->add_flag("--sweep", st.sweep, "Score every analyzer combination");
    fs_eval.report = eval->add_option("--report", st.report, "Write rows as JSON here");
    fs_eval.timeout = eval->add_option("--timeout", st.timeout, "Per-analyzer timeout, seconds");

    CLI::App* instrument = app.add_subcommand("instrument", "Write a probe-laden copy");
    instrument->add_option("--app", st.app, "App directory")->required();
    fs_instrument.out =
        instrument->add_option("--out", st.out, "Output directory")->required();
    fs_instrument.timeout =
        instrument->add_option("--timeout", st.timeout, "Remote fetch timeout, seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        FlagSet* fs = nullptr;
        if (optimize->parsed()) fs = &fs_optimize;
        if (analyze->parsed()) fs = &fs_analyze;
        if (serve->parsed()) fs = &fs_serve;
        if (eval->parsed()) fs = &fs_eval;
        if (instrument->parsed()) fs = &fs_instrument;
        std::filesystem::path config = std::filesystem::path(st.app) / "lacuna.toml";
        if (fs && std::filesystem::is_regular_file(config)) apply_config(config, st, *fs);

        if (optimize->parsed()) {
            lacuna::PipelineOptions opts = make_options(st);
            lacuna::PipelineResult res = lacuna::run_optimize(opts);
            print_warnings(res.diagnostics);
            print_runs(res.runs);
            std::printf("functions: %zu, dead: %zu, rewritten at %s: %zu\n",
                        res.merged.node_count() - 1, res.plan.dead.size(),
                        lacuna::to_string(opts.level), res.plan.actions.size());
            std::filesystem::path report = opts.report_path.empty()
                                               ? opts.out_dir / "_lacuna_report.json"
                                               : std::filesystem::path(opts.report_path);
            std::printf("output: %s\nreport: %s\n", opts.out_dir.string().c_str(),
                        report.string().c_str());
        } else if (analyze->parsed()) {
            lacuna::PipelineOptions opts = make_options(st);
            lacuna::PipelineResult res = lacuna::run_analysis(opts);
            print_warnings(res.diagnostics);
            print_runs(res.runs);
            if (!opts.report_path.empty()) {
                lacuna::fsutil::write_file(opts.report_path, res.report_json);
                std::printf("functions: %zu, dead: %zu\nreport: %s\n",
                            res.merged.node_count() - 1, res.plan.dead.size(),
                            opts.report_path.c_str());
            } else {
                std::fputs(res.report_json.c_str(), stdout);
            }
        } else if (serve->parsed()) {
            std::filesystem::path dir = st.app;
            if (std::filesystem::is_directory(dir / "_lacuna_bodies"))
                dir = dir / "_lacuna_bodies";
            lacuna::BodyStore store = lacuna::load_store(dir);
            std::printf("serving %zu function bodies on port %d\n", store.size(), st.lazy_port);
            std::fflush(stdout);
            lacuna::serve_bodies(store, st.lazy_port);
        } else if (eval->parsed()) {
            lacuna::PipelineOptions base = make_options(st);
            lacuna::CorpusOutcome outcome =
                lacuna::run_corpus(st.app, base.analyzers, st.sweep, base);
            print_warnings(outcome.diagnostics);
            std::fputs(lacuna::render_table(outcome.rows).c_str(), stdout);
            if (!outcome.aggregated.empty()) {
                std::printf("\naggregate (mean over %s):\n",
                            st.sweep ? "apps per combination" : "apps");
                std::fputs(lacuna::render_table(outcome.aggregated).c_str(), stdout);
            }
            if (!st.report.empty()) {
                std::vector<lacuna::EvalReport> all = outcome.rows;
                all.insert(all.end(), outcome.aggregated.begin(), outcome.aggregated.end());
                lacuna::fsutil::write_file(st.report, lacuna::render_reports_json(all));
            }
            if (outcome.rows.empty()) throw Error("pipeline", "no corpus entry produced a score");
        } else if (instrument->parsed()) {
            lacuna::PipelineOptions opts = make_options(st);
            lacuna::AppInventory inv = lacuna::run_instrument(opts);
            print_warnings(inv.diagnostics);
            std::printf("instrumented %zu functions into %s\n", inv.functions.size() - 1,
                        opts.out_dir.string().c_str());
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.module() == "config" ? 1 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
