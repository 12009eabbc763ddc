#include <doctest.h>

#include "lacuna/analyzers/analyzers.hpp"

#include "test_util.hpp"

using namespace lacuna;
using testutil::TestApp;
using testutil::id_of;

namespace {

// two declarations with known spans
const char* kSrc = "function f() {}\nfunction g() { f(); }\n";

std::string id(const TestApp& app, const std::string& name) {
    return id_of(app.inv, name).canonical();
}

}  // namespace

TEST_CASE("trace lines become labeled edges") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    std::string trace = "CALL <global>[0:0] " + id(app, "g") + "\n" +
                        "CALL " + id(app, "g") + " " + id(app, "f") + "\n";
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), trace, diags);
    CHECK(diags.empty());
    CHECK(g.edge_count() == 2);
    auto* labels = g.edge_labels(FunctionId::global_root(), id_of(app.inv, "g"));
    REQUIRE(labels != nullptr);
    CHECK(*labels == std::set<std::string>{"dynamic"});
}

TEST_CASE("repeated lines collapse to one edge") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    std::string line = "CALL <global>[0:0] " + id(app, "f") + "\n";
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), line + line + line, diags);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("malformed lines are skipped with a diagnostic") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    std::string trace = "CALL nonsense\n\nCALL <global>[0:0] " + id(app, "f") + "\n";
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), trace, diags);
    CHECK(g.edge_count() == 1);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].subject == "trace:1");
}

TEST_CASE("ids that do not resolve against the app are skipped") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    std::string trace = "CALL <global>[0:0] ghost.js[5:9]\n";
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), trace, diags);
    CHECK(g.edge_count() == 0);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("ghost.js[5:9]") != std::string::npos);
}

TEST_CASE("windows line endings are tolerated") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    std::string trace = "CALL <global>[0:0] " + id(app, "f") + "\r\n";
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), trace, diags);
    CHECK(diags.empty());
    CHECK(g.edge_count() == 1);
}

TEST_CASE("the label can be overridden for external trace sources") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    std::string trace = "CALL <global>[0:0] " + id(app, "f") + "\n";
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), trace, diags, "replay");
    auto* labels = g.edge_labels(FunctionId::global_root(), id_of(app.inv, "f"));
    REQUIRE(labels != nullptr);
    CHECK(*labels == std::set<std::string>{"replay"});
}

TEST_CASE("an empty trace yields the initial graph") {
    TestApp app({{"a.js", kSrc}});
    DiagnosticList diags;
    CallGraph g = analyze_dynamic(app.inv, initial_graph(app.inv), "", diags);
    CHECK(g.edge_count() == 0);
    CHECK(g.node_count() == app.inv.functions.size());
}
