#include <doctest.h>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/errors.hpp"

#include "test_util.hpp"

using namespace lacuna;
using testutil::TestApp;
using testutil::id_of;

namespace {

bool has_edge(const CallGraph& g, const FunctionId& a, const FunctionId& b) {
    return g.edge_labels(a, b) != nullptr;
}

bool subset_edges(const CallGraph& inner, const CallGraph& outer) {
    for (const auto& [key, labels] : inner.edges())
        if (!outer.edge_labels(key.first, key.second)) return false;
    return true;
}

CallGraph run_natives(const TestApp& app) {
    return analyze_native_calls(app.inv, initial_graph(app.inv), default_native_table());
}

}  // namespace

TEST_CASE("the default table knows the usual suspects") {
    NativeTable t = default_native_table();
    CHECK(t.count("setTimeout"));
    CHECK(t.count("setInterval"));
    CHECK(t.count("Array.prototype.map"));
    CHECK(t.count("Array.prototype.forEach"));
    CHECK(t.count("Function.prototype.call"));
    CHECK(t.count("Function.prototype.apply"));
    CHECK(t.count("Function.prototype.bind"));
    CHECK(t.count("addEventListener"));
}

TEST_CASE("table parsing accepts a JSON string array") {
    NativeTable t = parse_native_table("[\"setTimeout\", \"Array.prototype.map\"]");
    CHECK(t == NativeTable{"setTimeout", "Array.prototype.map"});
}

TEST_CASE("table parsing rejects junk") {
    CHECK_THROWS_AS(parse_native_table("{}"), Error);
    CHECK_THROWS_AS(parse_native_table("[1,2]"), Error);
    CHECK_THROWS_AS(parse_native_table("not json"), Error);
}

TEST_CASE("function arguments to known natives become callees") {
    TestApp app({{"a.js",
                  "function cb() {}\n"
                  "setTimeout(cb, 100);\n"}});
    CallGraph g = run_natives(app);
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "cb")));
}

TEST_CASE("callback attribution follows the enclosing function") {
    TestApp app({{"a.js",
                  "function cb() {}\n"
                  "function arm() { setTimeout(cb, 50); }\n"
                  "arm();\n"}});
    CallGraph g = run_natives(app);
    CHECK(has_edge(g, id_of(app.inv, "arm"), id_of(app.inv, "cb")));
}

TEST_CASE("array iteration natives match on the final path component") {
    TestApp app({{"a.js",
                  "function each(x) {}\n"
                  "[1, 2].map(each);\n"
                  "[3].forEach(function inline(v) {});\n"}});
    CallGraph g = run_natives(app);
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "each")));
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "inline")));
}

TEST_CASE("call and apply invoke their receiver") {
    TestApp app({{"a.js",
                  "function f() {}\nfunction g() {}\n"
                  "f.call(null);\n"
                  "g.apply(null, []);\n"}});
    CallGraph g = run_natives(app);
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "f")));
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "g")));
}

TEST_CASE("bound functions still call the original") {
    TestApp app({{"a.js",
                  "function orig() {}\n"
                  "var bound = orig.bind(null);\n"
                  "bound();\n"}});
    CallGraph g = run_natives(app);
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "orig")));
}

TEST_CASE("unknown natives contribute nothing") {
    TestApp app({{"a.js",
                  "function cb() {}\n"
                  "mysteryQueue(cb);\n"}});
    CallGraph g = run_natives(app);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("a trimmed table disables the trimmed natives") {
    TestApp app({{"a.js",
                  "function cb() {}\n"
                  "setTimeout(cb, 10);\n"
                  "[1].map(cb);\n"}});
    NativeTable only_map{"Array.prototype.map"};
    CallGraph g = analyze_native_calls(app.inv, initial_graph(app.inv), only_map);
    CHECK(g.edge_count() == 1);
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "cb")));
}

TEST_CASE("locally shadowed native names are not natives") {
    TestApp app({{"a.js",
                  "function cb() {}\n"
                  "function setTimeout(fn, ms) {}\n"
                  "setTimeout(cb, 10);\n"}});
    CallGraph g = run_natives(app);
    // the call resolves lexically to the local declaration; cb gains no edge
    CHECK_FALSE(has_edge(g, FunctionId::global_root(), id_of(app.inv, "cb")));
    CHECK(has_edge(g, FunctionId::global_root(), id_of(app.inv, "setTimeout")));
}

TEST_CASE("analyzer containment holds level by level on direct-call fixtures") {
    const char* fixtures[] = {
        "function f() {}\nf();\n",
        "function cb() {}\nsetTimeout(cb, 1);\n",
        "var o = { m: function m() {} };\no.m();\nfunction d() {}\nd();\n",
        "function a() { b(); }\nfunction b() {}\na.call();\n",
        "function x() {}\n[1].map(x);\nvar y = x;\ny();\n",
    };
    for (const char* src : fixtures) {
        TestApp app({{"a.js", src}});
        CallGraph g0 = initial_graph(app.inv);
        CallGraph s = analyze_static(app.inv, g0);
        CallGraph a = analyze_acg(app.inv, g0);
        CallGraph n = analyze_native_calls(app.inv, g0, default_native_table());
        CAPTURE(src);
        CHECK(subset_edges(s, a));
        CHECK(subset_edges(a, n));
    }
}
