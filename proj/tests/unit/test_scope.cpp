#include <doctest.h>

#include <string>

#include "lacuna/js/parser.hpp"
#include "lacuna/js/scope.hpp"

using namespace lacuna::js;

namespace {

struct Model {
    AstArena arena;
    Node* program = nullptr;
    ScopeModel scopes;

    explicit Model(const std::string& src) {
        program = parse_program(src, arena);
        scopes.add_program(program);
        scopes.analyze_program(program);
    }

    Binding* global(const std::string& name) { return scopes.global()->find_local(name); }
};

}  // namespace

TEST_CASE("function declarations bind with their literal as value") {
    Model m("function f() {}\nvar g = function () {};\n");
    Binding* f = m.global("f");
    REQUIRE(f != nullptr);
    CHECK(f->kind == Binding::Kind::Function);
    REQUIRE(f->values.size() == 1);
    CHECK(f->values[0]->type == NodeType::FunctionDeclaration);

    Binding* g = m.global("g");
    REQUIRE(g != nullptr);
    REQUIRE(g->values.size() == 1);
    CHECK(g->values[0]->type == NodeType::FunctionExpression);
    CHECK_FALSE(g->reassigned);
}

TEST_CASE("assignment-born function values are tracked separately") {
    Model m("var h;\nh = function () {};\n");
    Binding* h = m.global("h");
    REQUIRE(h != nullptr);
    CHECK(h->values.empty());
    REQUIRE(h->assigned_values.size() == 1);
    CHECK(h->assigned_values[0]->type == NodeType::FunctionExpression);
    CHECK(h->reassigned);
}

TEST_CASE("plain reassignment flips the flag without adding values") {
    Model m("function f() {}\nf = 5;\n");
    Binding* f = m.global("f");
    REQUIRE(f != nullptr);
    CHECK(f->reassigned);
    CHECK(f->values.size() == 1);
    CHECK(f->assigned_values.empty());
}

TEST_CASE("compound assignment and update expressions count as writes") {
    Model m("var a = 1; a += 2;\nvar b = 1; b++;\nvar c = 1; --c;\nvar d = 1;\n");
    CHECK(m.global("a")->reassigned);
    CHECK(m.global("b")->reassigned);
    CHECK(m.global("c")->reassigned);
    CHECK_FALSE(m.global("d")->reassigned);
}

TEST_CASE("destructuring assignment targets count as writes") {
    Model m("var x = 1, y = 2, z = 3, w = 4;\n({x} = o);\n[y, [z]] = arr;\n({p: w = 9} = o);\n");
    CHECK(m.global("x")->reassigned);
    CHECK(m.global("y")->reassigned);
    CHECK(m.global("z")->reassigned);
    CHECK(m.global("w")->reassigned);
}

TEST_CASE("for-in and for-of loop targets count as writes") {
    Model m("var k, v;\nfor (k in o) {}\nfor (v of arr) {}\nfor (var d of arr) {}\n");
    CHECK(m.global("k")->reassigned);
    CHECK(m.global("v")->reassigned);
    // a fresh declaration per iteration is not a write to an outer binding
    Binding* d = m.global("d");
    REQUIRE(d != nullptr);
    CHECK_FALSE(d->reassigned);
}

TEST_CASE("member writes do not mark the object binding") {
    Model m("var o = {};\no.field = 1;\no['k'] = 2;\n");
    CHECK_FALSE(m.global("o")->reassigned);
}

TEST_CASE("parameters shadow outer bindings") {
    Model m("function f() {}\nfunction g(f) { f(); }\n");
    Binding* outer = m.global("f");
    REQUIRE(outer != nullptr);
    CHECK(outer->values.size() == 1);

    // the parameter lives in g's scope, distinct from the global f
    Node* g_fn = nullptr;
    for (Node* k : m.program->kids)
        if (k->type == NodeType::FunctionDeclaration && function_name(k)->str == "g") g_fn = k;
    REQUIRE(g_fn != nullptr);
    Scope* gs = m.scopes.scope_for(g_fn);
    REQUIRE(gs != nullptr);
    Binding* param = gs->find_local("f");
    REQUIRE(param != nullptr);
    CHECK(param->kind == Binding::Kind::Param);
    CHECK(param->values.empty());
}

TEST_CASE("var hoists to function scope, let stays in block") {
    Model m("function f() { { var a = 1; let b = 2; } }\n");
    Node* f_fn = m.program->kids[0];
    Scope* fs = m.scopes.scope_for(f_fn);
    REQUIRE(fs != nullptr);
    CHECK(fs->find_local("a") != nullptr);
    CHECK(fs->find_local("b") == nullptr);
}

TEST_CASE("undeclared assignment creates an implicit global") {
    Model m("function f() { leak = 1; }\n");
    Binding* leak = m.global("leak");
    REQUIRE(leak != nullptr);
    CHECK(leak->kind == Binding::Kind::Implicit);
    CHECK(leak->reassigned);
}

TEST_CASE("named function expression binds its own name inside itself only") {
    Model m("var v = function self() { return self; };\n");
    CHECK(m.global("self") == nullptr);
}

TEST_CASE("scripts share one global scope") {
    AstArena a1, a2;
    Node* p1 = parse_program("function shared() {}\n", a1);
    Node* p2 = parse_program("shared = 0;\n", a2);
    ScopeModel scopes;
    scopes.add_program(p1);
    scopes.add_program(p2);
    scopes.analyze_program(p1);
    scopes.analyze_program(p2);
    Binding* b = scopes.global()->find_local("shared");
    REQUIRE(b != nullptr);
    CHECK(b->values.size() == 1);
    CHECK(b->reassigned);
}

TEST_CASE("class declarations bind like functions") {
    Model m("class K { m() {} }\n");
    Binding* k = m.global("K");
    REQUIRE(k != nullptr);
    CHECK(k->kind == Binding::Kind::Class);
    REQUIRE(k->values.size() == 1);
    CHECK(k->values[0]->type == NodeType::ClassDeclaration);
}
