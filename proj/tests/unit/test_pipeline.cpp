#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "lacuna/fsutil.hpp"
#include "lacuna/pipeline.hpp"

#include "test_util.hpp"

using namespace lacuna;
using testutil::TempDir;
using testutil::TestApp;

namespace {

namespace fs = std::filesystem;

PipelineOptions base_options(const fs::path& app, const fs::path& out) {
    PipelineOptions o;
    o.app_root = app;
    o.out_dir = out;
    o.analyzers = {{"static", ""}, {"acg", ""}};
    return o;
}

std::vector<AnalyzerSpec> builtins(std::initializer_list<const char*> names) {
    std::vector<AnalyzerSpec> specs;
    for (const char* n : names) specs.push_back({n, ""});
    return specs;
}

}  // namespace

TEST_CASE("validation rejects a missing app directory") {
    TempDir t;
    PipelineOptions o = base_options(t.path() / "absent", t.path() / "out");
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
    try {
        validate_options(o, true, true);
    } catch (const Error& e) {
        CHECK(e.module() == "config");
    }
}

TEST_CASE("validation rejects an output directory inside the app") {
    TempDir t;
    testutil::write(t.path() / "app" / "a.js", "1;\n");
    PipelineOptions o = base_options(t.path() / "app", t.path() / "app" / "out");
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
    // and the app root itself
    o.out_dir = t.path() / "app";
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
}

TEST_CASE("validation rejects unknown and duplicate analyzers") {
    TempDir t;
    testutil::write(t.path() / "app" / "a.js", "1;\n");
    PipelineOptions o = base_options(t.path() / "app", t.path() / "out");

    o.analyzers = builtins({"static", "mystery"});
    CHECK_THROWS_AS(validate_options(o, true, true), Error);

    o.analyzers = builtins({"static", "static"});
    CHECK_THROWS_AS(validate_options(o, true, true), Error);

    o.analyzers.clear();
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
}

TEST_CASE("the dynamic analyzer needs a trace or a runner") {
    TempDir t;
    testutil::write(t.path() / "app" / "a.js", "1;\n");
    PipelineOptions o = base_options(t.path() / "app", t.path() / "out");
    o.analyzers = builtins({"dynamic"});
    CHECK_THROWS_AS(validate_options(o, true, true), Error);

    testutil::write(t.path() / "trace.txt", "");
    o.trace_path = (t.path() / "trace.txt").string();
    CHECK_NOTHROW(validate_options(o, true, true));

    o.trace_path = (t.path() / "missing.txt").string();
    CHECK_THROWS_AS(validate_options(o, true, true), Error);

    o.trace_path.clear();
    o.runner_command = "node runner.js";
    CHECK_NOTHROW(validate_options(o, true, true));
}

TEST_CASE("ports and timeouts are range-checked") {
    TempDir t;
    testutil::write(t.path() / "app" / "a.js", "1;\n");
    PipelineOptions o = base_options(t.path() / "app", t.path() / "out");
    o.lazy_port = 0;
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
    o.lazy_port = 70000;
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
    o.lazy_port = 8125;
    o.timeout_seconds = 0;
    CHECK_THROWS_AS(validate_options(o, true, true), Error);
}

TEST_CASE("analysis runs the requested ensemble and classifies") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js",
                    "function used() {}\nfunction unused() {}\nused();\n");
    PipelineOptions o = base_options(t.path() / "app", "");
    o.analyzers = builtins({"static", "acg", "native-calls"});

    PipelineResult r = run_analysis(o);
    CHECK(r.runs.size() == 3);
    for (const auto& run : r.runs) CHECK(run.ok);
    CHECK(r.plan.alive.size() == 1);
    CHECK(r.plan.dead.size() == 1);
    CHECK(r.report_json.find("\"unused\"") != std::string::npos);
}

TEST_CASE("a failing analyzer degrades the ensemble with a warning") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js", "function f() {}\nf();\n");
    PipelineOptions o = base_options(t.path() / "app", "");
    o.analyzers = {{"static", ""}, {"ext", "/nonexistent/never-runs"}};

    PipelineResult r = run_analysis(o);
    REQUIRE(r.runs.size() == 2);
    CHECK(r.runs[0].ok);
    CHECK_FALSE(r.runs[1].ok);
    CHECK_FALSE(r.runs[1].error.empty());
    bool warned = std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [](const Diagnostic& d) {
        return d.subject == "analyzer:ext" && d.message.find("degrades") != std::string::npos;
    });
    CHECK(warned);
    // the static result still classifies f alive
    CHECK(r.plan.alive.size() == 1);
}

TEST_CASE("all analyzers failing is a pipeline error") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js", "function f() {}\n");
    PipelineOptions o = base_options(t.path() / "app", "");
    o.analyzers = {{"e1", "/nonexistent/a"}, {"e2", "/nonexistent/b"}};
    CHECK_THROWS_AS(run_analysis(o), Error);
}

TEST_CASE("optimizing writes the copy, report, and emitted graph") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js",
                    "function used() {}\nfunction unused() { return 9; }\nused();\n");
    PipelineOptions o = base_options(t.path() / "app", t.path() / "out");
    o.level = OptLevel::OL2;
    o.analyzers = builtins({"static"});
    o.emit_graph_path = (t.path() / "graph.json").string();

    run_optimize(o);
    std::string out_js = testutil::slurp(t.path() / "out" / "main.js");
    CHECK(out_js.find("function unused() {}") != std::string::npos);
    CHECK(fs::exists(t.path() / "out" / "_lacuna_report.json"));
    CHECK(fs::exists(t.path() / "graph.json"));
    std::string graph = testutil::slurp(t.path() / "graph.json");
    CHECK(graph.find("\"static\"") != std::string::npos);
}

TEST_CASE("the input tree is never modified") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js", "function f() {}\nf();\n");
    uint64_t before = fsutil::hash_tree(t.path() / "app");

    PipelineOptions o = base_options(t.path() / "app", t.path() / "out");
    o.level = OptLevel::OL3;
    o.analyzers = builtins({"static", "acg", "native-calls"});
    run_optimize(o);

    CHECK(fsutil::hash_tree(t.path() / "app") == before);
}

TEST_CASE("a recorded trace feeds the dynamic analyzer through the pipeline") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js", "function f() {}\nvar go = f;\ngo();\n");
    // static cannot see the aliased call; the trace can
    testutil::write(t.path() / "trace.txt", "CALL <global>[0:0] main.js[0:15]\n");

    PipelineOptions o = base_options(t.path() / "app", "");
    o.analyzers = builtins({"static", "dynamic"});
    o.trace_path = (t.path() / "trace.txt").string();

    PipelineResult r = run_analysis(o);
    CHECK(r.plan.alive.size() == 1);
    CHECK(r.plan.dead.empty());
    auto* labels =
        r.merged.edge_labels(FunctionId::global_root(), FunctionId{"main.js", 0, 15});
    REQUIRE(labels != nullptr);
    CHECK(labels->count("dynamic") == 1);
}

TEST_CASE("instrumenting writes a runnable copy") {
    TempDir t;
    testutil::write(t.path() / "app" / "main.js", "function f() {}\nf();\n");
    PipelineOptions o = base_options(t.path() / "app", t.path() / "instr");
    o.analyzers.clear();

    run_instrument(o);
    CHECK(testutil::slurp(t.path() / "instr" / "main.js").find("__lacuna__.enter") !=
          std::string::npos);
    CHECK(fs::exists(t.path() / "instr" / "_lacuna_manifest.json"));
}

TEST_CASE("corpus evaluation scores each entry and aggregates") {
    TempDir t;
    // entry one: perfect detection
    testutil::write(t.path() / "corpus" / "one" / "app" / "a.js",
                    "function used() {}\nfunction unused() {}\nused();\n");
    // ids: used = a.js[0:18], unused = a.js[19:39]
    std::string used_id = "a.js[0:18]";
    std::string unused_id = "a.js[19:39]";
    testutil::write(t.path() / "corpus" / "one" / "truth.json",
                    "{\"functions\":[{\"id\":\"" + used_id + "\",\"status\":\"alive\"},"
                    "{\"id\":\"" + unused_id + "\",\"status\":\"dead\"}]}");
    // entry two: everything alive
    testutil::write(t.path() / "corpus" / "two" / "app" / "b.js", "function f() {}\nf();\n");
    testutil::write(t.path() / "corpus" / "two" / "truth.json",
                    "{\"functions\":[{\"id\":\"b.js[0:15]\",\"status\":\"alive\"}]}");
    // not an entry: no truth.json
    testutil::write(t.path() / "corpus" / "stray" / "app" / "c.js", "1;\n");

    PipelineOptions base;
    base.app_root = t.path() / "corpus";
    CorpusOutcome out =
        run_corpus(t.path() / "corpus", builtins({"static", "acg"}), false, base);

    REQUIRE(out.rows.size() == 2);
    CHECK(out.rows[0].app == "one");
    CHECK(out.rows[0].tp == 1);
    CHECK(out.rows[0].precision == doctest::Approx(1.0));
    CHECK(out.rows[1].app == "two");
    REQUIRE(out.aggregated.size() == 1);
    CHECK(out.aggregated[0].app == "<aggregate>");
    CHECK(out.aggregated[0].tp == 1);
}

TEST_CASE("a broken corpus entry is reported and skipped") {
    TempDir t;
    testutil::write(t.path() / "corpus" / "bad" / "app" / "a.js", "function f() {}\n");
    testutil::write(t.path() / "corpus" / "bad" / "truth.json", "{\"functions\":[]}");  // uncovered
    testutil::write(t.path() / "corpus" / "good" / "app" / "b.js", "function g() {}\ng();\n");
    testutil::write(t.path() / "corpus" / "good" / "truth.json",
                    "{\"functions\":[{\"id\":\"b.js[0:15]\",\"status\":\"alive\"}]}");

    PipelineOptions base;
    CorpusOutcome out = run_corpus(t.path() / "corpus", builtins({"static"}), false, base);
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0].app == "good");
    bool flagged = std::any_of(out.diagnostics.begin(), out.diagnostics.end(),
                               [](const Diagnostic& d) { return d.subject == "bad"; });
    CHECK(flagged);
}

TEST_CASE("a dynamic request without a trace fails that entry's dynamic run") {
    TempDir t;
    testutil::write(t.path() / "corpus" / "e" / "app" / "a.js", "function f() {}\nf();\n");
    testutil::write(t.path() / "corpus" / "e" / "truth.json",
                    "{\"functions\":[{\"id\":\"a.js[0:15]\",\"status\":\"alive\"}]}");

    PipelineOptions base;
    CorpusOutcome out = run_corpus(t.path() / "corpus", builtins({"static", "dynamic"}), true, base);
    // sweep of two analyzers: static alone survives; the two dynamic
    // combinations are skipped with diagnostics
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0].combination_name() == "static");
    CHECK_FALSE(out.diagnostics.empty());
}
