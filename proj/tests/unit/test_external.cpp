#include <doctest.h>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/errors.hpp"

#include "test_util.hpp"

using namespace lacuna;
using testutil::TestApp;
using testutil::id_of;

namespace {

#ifndef LACUNA_CG_STUB
#error "LACUNA_CG_STUB must point at the stub analyzer binary"
#endif

std::string stub_cmd(const std::string& mode) { return std::string(LACUNA_CG_STUB) + " " + mode; }

}  // namespace

TEST_CASE("a quiet external analyzer yields the node set with no edges") {
    TestApp app({{"a.js", "function a() {}\nfunction b() {}\na();\n"}});
    CallGraph g0 = initial_graph(app.inv);
    CallGraph g = analyze_external(app.inv, g0, "mirror", stub_cmd("echo"), 10);
    // echo returns g0 itself: same nodes, no edges
    CHECK(g.node_ids() == g0.node_ids());
    CHECK(g.edge_count() == 0);
}

TEST_CASE("external edges are relabeled to the analyzer's name") {
    TestApp app({{"a.js",
                  "function a() {}\n"
                  "function b() {}\n"
                  "var x = function () {};\n"}});
    CallGraph g0 = initial_graph(app.inv);
    CallGraph g = analyze_external(app.inv, g0, "fig", stub_cmd("figure2"), 10);
    CHECK(g.edge_count() == 3);
    auto* labels = g.edge_labels(FunctionId::global_root(), id_of(app.inv, "a"));
    REQUIRE(labels != nullptr);
    CHECK(*labels == std::set<std::string>{"fig"});
}

TEST_CASE("external edges must reference known nodes") {
    TestApp app({{"a.js", "function a() {}\n"}});
    CallGraph g0 = initial_graph(app.inv);
    CHECK_THROWS_AS(analyze_external(app.inv, g0, "ghost", stub_cmd("unknown-id"), 10), Error);
}

TEST_CASE("a nonzero exit becomes an analyzer error carrying stderr") {
    TestApp app({{"a.js", "function a() {}\n"}});
    CallGraph g0 = initial_graph(app.inv);
    try {
        analyze_external(app.inv, g0, "boom", stub_cmd("fail"), 10);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("deliberate failure") != std::string::npos);
    }
}

TEST_CASE("garbage stdout becomes an analyzer error") {
    TestApp app({{"a.js", "function a() {}\n"}});
    CallGraph g0 = initial_graph(app.inv);
    CHECK_THROWS_AS(analyze_external(app.inv, g0, "junk", stub_cmd("bad-json"), 10), Error);
}

TEST_CASE("a hanging analyzer times out") {
    TestApp app({{"a.js", "function a() {}\n"}});
    CallGraph g0 = initial_graph(app.inv);
    CHECK_THROWS_AS(analyze_external(app.inv, g0, "slow", stub_cmd("slow"), 1), Error);
}

TEST_CASE("a missing command becomes an analyzer error") {
    TestApp app({{"a.js", "function a() {}\n"}});
    CallGraph g0 = initial_graph(app.inv);
    CHECK_THROWS_AS(
        analyze_external(app.inv, g0, "absent", "/nonexistent/analyzer-binary", 5), Error);
}
