#include "lacuna/js/parser.hpp"

#include <array>
#include <optional>

namespace lacuna::js {

namespace {

bool is_reserved_word(std::string_view s) {
    static const std::array<std::string_view, 36> words = {
        "break",      "case",   "catch", "class",  "const",    "continue", "debugger",
        "default",    "delete", "do",    "else",   "enum",     "export",   "extends",
        "false",      "finally", "for",  "function", "if",     "import",   "in",
        "instanceof", "new",    "null",  "return", "super",    "switch",   "this",
        "throw",      "true",   "try",   "typeof", "var",      "void",     "while",
        "with",
    };
    for (auto w : words)
        if (w == s) return true;
    return false;
}

int binary_precedence(const Token& t, bool no_in) {
    if (t.type == Token::Type::Identifier) {
        if (t.text == "instanceof") return 8;
        if (t.text == "in") return no_in ? 0 : 8;
        return 0;
    }
    if (t.type != Token::Type::Punct) return 0;
    const std::string& p = t.text;
    if (p == "??") return 1;
    if (p == "||") return 2;
    if (p == "&&") return 3;
    if (p == "|") return 4;
    if (p == "^") return 5;
    if (p == "&") return 6;
    if (p == "==" || p == "!=" || p == "===" || p == "!==") return 7;
    if (p == "<" || p == ">" || p == "<=" || p == ">=") return 8;
    if (p == "<<" || p == ">>" || p == ">>>") return 9;
    if (p == "+" || p == "-") return 10;
    if (p == "*" || p == "/" || p == "%") return 11;
    if (p == "**") return 12;
    return 0;
}

bool is_assign_op(const Token& t) {
    if (t.type != Token::Type::Punct) return false;
    const std::string& p = t.text;
    return p == "=" || p == "+=" || p == "-=" || p == "*=" || p == "/=" || p == "%=" ||
           p == "**=" || p == "<<=" || p == ">>=" || p == ">>>=" || p == "&=" || p == "|=" ||
           p == "^=" || p == "&&=" || p == "||=" || p == "?\?=";
}

class Parser {
public:
    Parser(std::string_view source, AstArena& arena) : lex_(source), arena_(arena) {
        cur_ = lex_.next(true);
    }

    Node* parse_program() {
        Node* program = arena_.make(NodeType::Program, 0, static_cast<uint32_t>(lex_.source().size()));
        while (cur_.type != Token::Type::Eof) program->kids.push_back(parse_statement());
        return program;
    }

private:
    struct State {
        Lexer lex;
        Token cur;
        uint32_t prev_end;
    };

    State save() const { return State{lex_, cur_, prev_end_}; }
    void restore(const State& s) {
        lex_ = s.lex;
        cur_ = s.cur;
        prev_end_ = s.prev_end;
    }

    [[noreturn]] void fail(const std::string& message) const { throw SyntaxError{cur_.start, message}; }

    void advance(bool expr_next) {
        prev_end_ = cur_.end;
        cur_ = lex_.next(expr_next);
    }

    bool eat(std::string_view p, bool expr_next) {
        if (cur_.is_punct(p)) {
            advance(expr_next);
            return true;
        }
        return false;
    }

    void expect(std::string_view p, bool expr_next) {
        if (!eat(p, expr_next)) fail("expected '" + std::string(p) + "'");
    }

    bool eat_ident(std::string_view name, bool expr_next) {
        if (cur_.is_identifier(name)) {
            advance(expr_next);
            return true;
        }
        return false;
    }

    Token peek(bool expr_next = false) const {
        Lexer tmp = lex_;
        return tmp.next(expr_next);
    }

    void semicolon() {
        if (eat(";", true)) return;
        if (cur_.is_punct("}") || cur_.type == Token::Type::Eof || cur_.newline_before) return;
        fail("expected ';'");
    }

    Node* make(NodeType t, uint32_t start) { return arena_.make(t, start, start); }

    Node* finish(Node* n) {
        n->end = prev_end_;
        return n;
    }

    Node* ident_node(const Token& t) {
        Node* n = arena_.make(NodeType::Identifier, t.start, t.end);
        n->str = t.text;
        return n;
    }

    // ---- statements ----

    Node* parse_statement() {
        if (cur_.is_punct("{")) return parse_block();
        if (cur_.is_punct(";")) {
            Node* n = make(NodeType::EmptyStatement, cur_.start);
            advance(true);
            return finish(n);
        }
        if (cur_.type == Token::Type::Identifier) {
            const std::string& w = cur_.text;
            if (w == "var" || w == "const") return parse_variable_statement(w);
            if (w == "let") {
                Token p = peek();
                if ((p.type == Token::Type::Identifier && !is_reserved_word(p.text)) ||
                    p.is_punct("[") || p.is_punct("{"))
                    return parse_variable_statement(w);
            }
            if (w == "function") return parse_function_statement(cur_.start, false);
            if (w == "async") {
                Token p = peek();
                if (p.is_identifier("function") && !p.newline_before) {
                    uint32_t start = cur_.start;
                    advance(false);
                    return parse_function_statement(start, true);
                }
            }
            if (w == "if") return parse_if();
            if (w == "for") return parse_for();
            if (w == "while") return parse_while();
            if (w == "do") return parse_do_while();
            if (w == "return") return parse_return();
            if (w == "break" || w == "continue") return parse_break_continue(w == "break");
            if (w == "throw") return parse_throw();
            if (w == "try") return parse_try();
            if (w == "switch") return parse_switch();
            if (w == "with") return parse_with();
            if (w == "class") return parse_class(cur_.start, true);
            if (w == "debugger") {
                Node* n = make(NodeType::DebuggerStatement, cur_.start);
                advance(false);
                semicolon();
                return finish(n);
            }
            if (w == "import") {
                Token p = peek();
                if (!p.is_punct("(") && !p.is_punct(".")) return parse_import();
            }
            if (w == "export") return parse_export();
            if (!is_reserved_word(w)) {
                Token p = peek();
                if (p.is_punct(":")) {
                    Node* n = make(NodeType::LabeledStatement, cur_.start);
                    n->str = w;
                    advance(false);
                    expect(":", true);
                    n->kids.push_back(parse_statement());
                    return finish(n);
                }
            }
        }
        return parse_expression_statement();
    }

    Node* parse_expression_statement() {
        Node* n = make(NodeType::ExpressionStatement, cur_.start);
        n->kids.push_back(parse_expression(false));
        semicolon();
        return finish(n);
    }

    Node* parse_block() {
        Node* n = make(NodeType::BlockStatement, cur_.start);
        expect("{", true);
        while (!cur_.is_punct("}")) {
            if (cur_.type == Token::Type::Eof) fail("unterminated block");
            n->kids.push_back(parse_statement());
        }
        advance(true);
        return finish(n);
    }

    Node* parse_variable_statement(const std::string& kind) {
        Node* n = parse_variable_declaration(kind, false);
        semicolon();
        return finish(n);
    }

    Node* parse_variable_declaration(const std::string& kind, bool no_in) {
        Node* n = make(NodeType::VariableDeclaration, cur_.start);
        n->str = kind;
        advance(true);
        for (;;) {
            Node* d = make(NodeType::VariableDeclarator, cur_.start);
            d->kids.push_back(parse_binding_target());
            if (eat("=", true))
                d->kids.push_back(parse_assignment(no_in));
            else
                d->kids.push_back(nullptr);
            n->kids.push_back(finish(d));
            if (!eat(",", true)) break;
        }
        return finish(n);
    }

    Node* parse_binding_target() {
        if (cur_.is_punct("{")) return parse_object_pattern();
        if (cur_.is_punct("[")) return parse_array_pattern();
        if (cur_.type == Token::Type::Identifier && !is_reserved_word(cur_.text)) {
            Node* n = ident_node(cur_);
            advance(false);
            return n;
        }
        fail("expected binding target");
    }

    Node* parse_binding_element() {
        Node* target = parse_binding_target();
        if (eat("=", true)) {
            Node* n = arena_.make(NodeType::AssignmentPattern, target->start, target->start);
            n->kids.push_back(target);
            n->kids.push_back(parse_assignment(false));
            return finish(n);
        }
        return target;
    }

    Node* parse_object_pattern() {
        Node* n = make(NodeType::ObjectPattern, cur_.start);
        expect("{", false);
        while (!cur_.is_punct("}")) {
            if (cur_.is_punct("...")) {
                Node* r = make(NodeType::RestElement, cur_.start);
                advance(true);
                r->kids.push_back(parse_binding_target());
                n->kids.push_back(finish(r));
            } else {
                Node* p = make(NodeType::Property, cur_.start);
                Node* key = parse_property_key(p);
                p->kids.push_back(key);
                if (eat(":", true)) {
                    p->kids.push_back(parse_binding_element());
                } else {
                    p->flags |= kShorthand;
                    if (key->type != NodeType::Identifier) fail("invalid shorthand pattern");
                    if (eat("=", true)) {
                        Node* ap = arena_.make(NodeType::AssignmentPattern, key->start, key->start);
                        Node* target = arena_.make(NodeType::Identifier, key->start, key->end);
                        target->str = key->str;
                        ap->kids.push_back(target);
                        ap->kids.push_back(parse_assignment(false));
                        p->kids.push_back(finish(ap));
                    } else {
                        Node* target = arena_.make(NodeType::Identifier, key->start, key->end);
                        target->str = key->str;
                        p->kids.push_back(target);
                    }
                }
                n->kids.push_back(finish(p));
            }
            if (!eat(",", false)) break;
        }
        expect("}", false);
        return finish(n);
    }

    Node* parse_array_pattern() {
        Node* n = make(NodeType::ArrayPattern, cur_.start);
        expect("[", true);
        while (!cur_.is_punct("]")) {
            if (cur_.is_punct(",")) {
                n->kids.push_back(nullptr);
                advance(true);
                continue;
            }
            if (cur_.is_punct("...")) {
                Node* r = make(NodeType::RestElement, cur_.start);
                advance(true);
                r->kids.push_back(parse_binding_target());
                n->kids.push_back(finish(r));
            } else {
                n->kids.push_back(parse_binding_element());
            }
            if (!cur_.is_punct("]")) expect(",", true);
        }
        expect("]", false);
        return finish(n);
    }

    Node* parse_function_statement(uint32_t start, bool async) {
        Node* n = parse_function_literal(NodeType::FunctionDeclaration, start, async);
        if (!n->kids[0]) fail("function declaration needs a name");
        return n;
    }

    // cur_ is at 'function'. kids[0] name may be null for expressions.
    Node* parse_function_literal(NodeType type, uint32_t start, bool async) {
        Node* n = make(type, start);
        if (async) n->flags |= kAsync;
        advance(false);  // 'function'
        if (eat("*", false)) n->flags |= kGenerator;
        if (cur_.type == Token::Type::Identifier && !is_reserved_word(cur_.text)) {
            n->kids.push_back(ident_node(cur_));
            advance(false);
        } else {
            n->kids.push_back(nullptr);
        }
        parse_params_into(n);
        parse_function_body(n, async, (n->flags & kGenerator) != 0);
        return finish(n);
    }

    void parse_params_into(Node* fn) {
        expect("(", false);
        while (!cur_.is_punct(")")) {
            if (cur_.is_punct("...")) {
                Node* r = make(NodeType::RestElement, cur_.start);
                advance(true);
                r->kids.push_back(parse_binding_target());
                fn->kids.push_back(finish(r));
            } else {
                fn->kids.push_back(parse_binding_element());
            }
            if (!cur_.is_punct(")")) expect(",", false);
        }
        advance(false);  // ')'
    }

    void parse_function_body(Node* fn, bool async, bool generator) {
        bool saved_async = in_async_, saved_gen = in_generator_;
        int saved_depth = fn_depth_;
        in_async_ = async;
        in_generator_ = generator;
        fn_depth_++;
        if (!cur_.is_punct("{")) fail("expected function body");
        fn->body_interior_start = cur_.end;
        Node* body = parse_block();
        fn->body_interior_end = body->end - 1;
        fn->kids.push_back(body);
        in_async_ = saved_async;
        in_generator_ = saved_gen;
        fn_depth_ = saved_depth;
    }

    Node* parse_if() {
        Node* n = make(NodeType::IfStatement, cur_.start);
        advance(false);
        expect("(", true);
        n->kids.push_back(parse_expression(false));
        expect(")", true);
        n->kids.push_back(parse_statement());
        if (eat_ident("else", true))
            n->kids.push_back(parse_statement());
        else
            n->kids.push_back(nullptr);
        return finish(n);
    }

    Node* parse_while() {
        Node* n = make(NodeType::WhileStatement, cur_.start);
        advance(false);
        expect("(", true);
        n->kids.push_back(parse_expression(false));
        expect(")", true);
        n->kids.push_back(parse_statement());
        return finish(n);
    }

    Node* parse_do_while() {
        Node* n = make(NodeType::DoWhileStatement, cur_.start);
        advance(true);
        n->kids.push_back(parse_statement());
        if (!eat_ident("while", false)) fail("expected 'while'");
        expect("(", true);
        n->kids.push_back(parse_expression(false));
        expect(")", false);
        eat(";", true);
        return finish(n);
    }

    Node* parse_for() {
        Node* start_node = make(NodeType::ForStatement, cur_.start);
        advance(false);
        eat_ident("await", false);
        expect("(", true);

        Node* init = nullptr;
        if (cur_.is_punct(";")) {
            // no init
        } else if (cur_.is_identifier("var") || cur_.is_identifier("const") ||
                   (cur_.is_identifier("let") && is_let_declaration_ahead())) {
            init = parse_variable_declaration(cur_.text, true);
        } else {
            init = parse_expression(true);
        }

        if (init && (cur_.is_identifier("in") || cur_.is_identifier("of"))) {
            bool of = cur_.text == "of";
            Node* n = start_node;
            n->type = NodeType::ForInStatement;
            if (of) n->flags |= kForOf;
            if (init->type != NodeType::VariableDeclaration) init = to_pattern(init);
            n->kids.push_back(init);
            advance(true);
            n->kids.push_back(of ? parse_assignment(false) : parse_expression(false));
            expect(")", true);
            n->kids.push_back(parse_statement());
            return finish(n);
        }

        Node* n = start_node;
        n->kids.push_back(init);
        expect(";", true);
        n->kids.push_back(cur_.is_punct(";") ? nullptr : parse_expression(false));
        expect(";", true);
        n->kids.push_back(cur_.is_punct(")") ? nullptr : parse_expression(false));
        expect(")", true);
        n->kids.push_back(parse_statement());
        return finish(n);
    }

    bool is_let_declaration_ahead() const {
        Token p = peek();
        return (p.type == Token::Type::Identifier && !is_reserved_word(p.text)) || p.is_punct("[") ||
               p.is_punct("{");
    }

    Node* parse_return() {
        Node* n = make(NodeType::ReturnStatement, cur_.start);
        advance(true);
        if (!cur_.is_punct(";") && !cur_.is_punct("}") && cur_.type != Token::Type::Eof &&
            !cur_.newline_before)
            n->kids.push_back(parse_expression(false));
        semicolon();
        return finish(n);
    }

    Node* parse_break_continue(bool is_break) {
        Node* n = make(is_break ? NodeType::BreakStatement : NodeType::ContinueStatement, cur_.start);
        advance(false);
        if (cur_.type == Token::Type::Identifier && !is_reserved_word(cur_.text) && !cur_.newline_before) {
            n->str = cur_.text;
            advance(false);
        }
        semicolon();
        return finish(n);
    }

    Node* parse_throw() {
        Node* n = make(NodeType::ThrowStatement, cur_.start);
        advance(true);
        if (cur_.newline_before) fail("newline after 'throw'");
        n->kids.push_back(parse_expression(false));
        semicolon();
        return finish(n);
    }

    Node* parse_try() {
        Node* n = make(NodeType::TryStatement, cur_.start);
        advance(false);
        n->kids.push_back(parse_block());
        if (cur_.is_identifier("catch")) {
            Node* c = make(NodeType::CatchClause, cur_.start);
            advance(false);
            if (eat("(", false)) {
                c->kids.push_back(parse_binding_target());
                expect(")", false);
            } else {
                c->kids.push_back(nullptr);
            }
            c->kids.push_back(parse_block());
            n->kids.push_back(finish(c));
        } else {
            n->kids.push_back(nullptr);
        }
        if (eat_ident("finally", false))
            n->kids.push_back(parse_block());
        else
            n->kids.push_back(nullptr);
        if (!n->kids[1] && !n->kids[2]) fail("try needs catch or finally");
        return finish(n);
    }

    Node* parse_switch() {
        Node* n = make(NodeType::SwitchStatement, cur_.start);
        advance(false);
        expect("(", true);
        n->kids.push_back(parse_expression(false));
        expect(")", false);
        expect("{", false);
        while (!cur_.is_punct("}")) {
            Node* c = make(NodeType::SwitchCase, cur_.start);
            if (eat_ident("case", true)) {
                c->kids.push_back(parse_expression(false));
            } else if (eat_ident("default", false)) {
                c->kids.push_back(nullptr);
            } else {
                fail("expected 'case' or 'default'");
            }
            expect(":", true);
            while (!cur_.is_punct("}") && !cur_.is_identifier("case") && !cur_.is_identifier("default"))
                c->kids.push_back(parse_statement());
            n->kids.push_back(finish(c));
        }
        advance(true);
        return finish(n);
    }

    Node* parse_with() {
        Node* n = make(NodeType::WithStatement, cur_.start);
        advance(false);
        expect("(", true);
        n->kids.push_back(parse_expression(false));
        expect(")", true);
        n->kids.push_back(parse_statement());
        return finish(n);
    }

    Node* parse_import() {
        Node* n = make(NodeType::ImportDeclaration, cur_.start);
        advance(false);
        if (cur_.type == Token::Type::String) {
            n->str = cur_.value;
            advance(false);
            semicolon();
            return finish(n);
        }
        bool expect_from = false;
        if (cur_.type == Token::Type::Identifier && !is_reserved_word(cur_.text)) {
            n->kids.push_back(ident_node(cur_));
            advance(false);
            expect_from = true;
            eat(",", false);
        }
        if (cur_.is_punct("*")) {
            advance(false);
            if (!eat_ident("as", false)) fail("expected 'as'");
            n->kids.push_back(ident_node(cur_));
            advance(false);
            expect_from = true;
        } else if (cur_.is_punct("{")) {
            advance(false);
            while (!cur_.is_punct("}")) {
                if (cur_.type != Token::Type::Identifier && cur_.type != Token::Type::String)
                    fail("expected import name");
                Token imported = cur_;
                advance(false);
                if (eat_ident("as", false)) {
                    n->kids.push_back(ident_node(cur_));
                    advance(false);
                } else {
                    n->kids.push_back(ident_node(imported));
                }
                if (!eat(",", false)) break;
            }
            expect("}", false);
            expect_from = true;
        }
        if (expect_from) {
            if (!eat_ident("from", false)) fail("expected 'from'");
            if (cur_.type != Token::Type::String) fail("expected module specifier");
            n->str = cur_.value;
            advance(false);
        }
        semicolon();
        return finish(n);
    }

    Node* parse_export() {
        uint32_t start = cur_.start;
        advance(false);
        if (cur_.is_identifier("default")) {
            Node* n = make(NodeType::ExportDefaultDeclaration, start);
            advance(true);
            if (cur_.is_identifier("function")) {
                n->kids.push_back(parse_function_literal(NodeType::FunctionDeclaration, cur_.start, false));
            } else if (cur_.is_identifier("async") && peek().is_identifier("function")) {
                uint32_t fstart = cur_.start;
                advance(false);
                n->kids.push_back(parse_function_literal(NodeType::FunctionDeclaration, fstart, true));
            } else if (cur_.is_identifier("class")) {
                n->kids.push_back(parse_class(cur_.start, true));
            } else {
                n->kids.push_back(parse_assignment(false));
                semicolon();
            }
            return finish(n);
        }
        if (cur_.is_punct("*")) {
            Node* n = make(NodeType::ExportAllDeclaration, start);
            advance(false);
            if (eat_ident("as", false)) advance(false);
            if (!eat_ident("from", false)) fail("expected 'from'");
            if (cur_.type != Token::Type::String) fail("expected module specifier");
            n->str = cur_.value;
            advance(false);
            semicolon();
            return finish(n);
        }
        if (cur_.is_punct("{")) {
            Node* n = make(NodeType::ExportNamedDeclaration, start);
            advance(false);
            while (!cur_.is_punct("}")) {
                if (cur_.type != Token::Type::Identifier && cur_.type != Token::Type::String)
                    fail("expected export name");
                advance(false);
                if (eat_ident("as", false)) advance(false);
                if (!eat(",", false)) break;
            }
            expect("}", false);
            if (eat_ident("from", false)) {
                if (cur_.type != Token::Type::String) fail("expected module specifier");
                n->str = cur_.value;
                advance(false);
            }
            semicolon();
            n->kids.push_back(nullptr);
            return finish(n);
        }
        Node* n = make(NodeType::ExportNamedDeclaration, start);
        n->kids.push_back(parse_statement());
        return finish(n);
    }

    // ---- expressions ----

    Node* parse_expression(bool no_in) {
        Node* first = parse_assignment(no_in);
        if (!cur_.is_punct(",")) return first;
        Node* n = arena_.make(NodeType::SequenceExpression, first->start, first->start);
        n->kids.push_back(first);
        while (eat(",", true)) n->kids.push_back(parse_assignment(no_in));
        return finish(n);
    }

    Node* parse_assignment(bool no_in) {
        if (in_generator_ && cur_.is_identifier("yield")) return parse_yield();

        uint32_t start = cur_.start;

        if (cur_.is_identifier("async")) {
            Token p = peek();
            if (!p.newline_before) {
                if (p.type == Token::Type::Identifier && !is_reserved_word(p.text) &&
                    p.text != "function") {
                    State s = save();
                    advance(false);
                    Token name = cur_;
                    advance(false);
                    if (cur_.is_punct("=>") && !cur_.newline_before) {
                        std::vector<Node*> params{ident_node(name)};
                        return finish_arrow(start, true, params);
                    }
                    restore(s);
                } else if (p.is_punct("(")) {
                    State s = save();
                    advance(false);
                    if (Node* a = try_arrow_from_paren(start, true)) return a;
                    restore(s);
                }
            }
        }

        if (cur_.type == Token::Type::Identifier && !is_reserved_word(cur_.text)) {
            Token p = peek();
            if (p.is_punct("=>") && !p.newline_before) {
                Token name = cur_;
                advance(false);
                std::vector<Node*> params{ident_node(name)};
                return finish_arrow(start, false, params);
            }
        }

        if (cur_.is_punct("(")) {
            if (Node* a = try_arrow_from_paren(start, false)) return a;
        }

        Node* lhs = parse_conditional(no_in);
        if (is_assign_op(cur_)) {
            Node* n = arena_.make(NodeType::AssignmentExpression, lhs->start, lhs->start);
            n->str = cur_.text;
            if (n->str == "=" &&
                (lhs->type == NodeType::ArrayExpression || lhs->type == NodeType::ObjectExpression))
                lhs = to_pattern(lhs);
            n->kids.push_back(lhs);
            advance(true);
            n->kids.push_back(parse_assignment(no_in));
            return finish(n);
        }
        return lhs;
    }

    Node* parse_yield() {
        Node* n = make(NodeType::YieldExpression, cur_.start);
        advance(true);
        if (eat("*", true)) n->flags |= kDelegate;
        if (!cur_.newline_before && !cur_.is_punct(")") && !cur_.is_punct("]") && !cur_.is_punct("}") &&
            !cur_.is_punct(",") && !cur_.is_punct(";") && !cur_.is_punct(":") &&
            cur_.type != Token::Type::Eof)
            n->kids.push_back(parse_assignment(false));
        return finish(n);
    }

    Node* try_arrow_from_paren(uint32_t start, bool async) {
        State s = save();
        try {
            std::vector<Node*> params;
            expect("(", false);
            while (!cur_.is_punct(")")) {
                if (cur_.is_punct("...")) {
                    Node* r = make(NodeType::RestElement, cur_.start);
                    advance(true);
                    r->kids.push_back(parse_binding_target());
                    params.push_back(finish(r));
                } else {
                    params.push_back(parse_binding_element());
                }
                if (!cur_.is_punct(")")) expect(",", false);
            }
            advance(false);  // ')'
            if (cur_.is_punct("=>") && !cur_.newline_before) return finish_arrow(start, async, params);
        } catch (const SyntaxError&) {
        }
        restore(s);
        return nullptr;
    }

    Node* finish_arrow(uint32_t start, bool async, std::vector<Node*>& params) {
        Node* n = make(NodeType::ArrowFunction, start);
        if (async) n->flags |= kAsync;
        n->kids.push_back(nullptr);  // arrows are unnamed
        for (Node* p : params) n->kids.push_back(p);
        expect("=>", true);
        if (cur_.is_punct("{")) {
            parse_function_body(n, async, false);
        } else {
            bool saved_async = in_async_;
            int saved_depth = fn_depth_;
            in_async_ = async;
            fn_depth_++;
            n->flags |= kArrowExprBody;
            n->body_interior_start = cur_.start;
            n->kids.push_back(parse_assignment(false));
            n->body_interior_end = prev_end_;
            in_async_ = saved_async;
            fn_depth_ = saved_depth;
        }
        return finish(n);
    }

    Node* parse_conditional(bool no_in) {
        Node* test = parse_binary(1, no_in);
        if (!eat("?", true)) return test;
        Node* n = arena_.make(NodeType::ConditionalExpression, test->start, test->start);
        n->kids.push_back(test);
        n->kids.push_back(parse_assignment(false));
        expect(":", true);
        n->kids.push_back(parse_assignment(no_in));
        return finish(n);
    }

    Node* parse_binary(int min_prec, bool no_in) {
        Node* left = parse_unary();
        for (;;) {
            int prec = binary_precedence(cur_, no_in);
            if (prec == 0 || prec < min_prec) return left;
            std::string op = cur_.text;
            bool logical = op == "&&" || op == "||" || op == "??";
            advance(true);
            Node* right = op == "**" ? parse_binary(prec, no_in) : parse_binary(prec + 1, no_in);
            Node* n = arena_.make(logical ? NodeType::LogicalExpression : NodeType::BinaryExpression,
                                  left->start, left->start);
            n->str = op;
            n->kids.push_back(left);
            n->kids.push_back(right);
            left = finish(n);
        }
    }

    Node* parse_unary() {
        if (cur_.type == Token::Type::Punct) {
            const std::string& p = cur_.text;
            if (p == "+" || p == "-" || p == "!" || p == "~") {
                Node* n = make(NodeType::UnaryExpression, cur_.start);
                n->str = p;
                advance(true);
                n->kids.push_back(parse_unary());
                return finish(n);
            }
            if (p == "++" || p == "--") {
                Node* n = make(NodeType::UpdateExpression, cur_.start);
                n->str = p;
                n->flags |= kPrefix;
                advance(true);
                n->kids.push_back(parse_unary());
                return finish(n);
            }
        }
        if (cur_.type == Token::Type::Identifier) {
            const std::string& w = cur_.text;
            if (w == "typeof" || w == "void" || w == "delete") {
                Node* n = make(NodeType::UnaryExpression, cur_.start);
                n->str = w;
                advance(true);
                n->kids.push_back(parse_unary());
                return finish(n);
            }
            if (w == "await" && (in_async_ || fn_depth_ == 0)) {
                Token p = peek();
                bool operand_ahead =
                    p.type == Token::Type::Identifier || p.type == Token::Type::Number ||
                    p.type == Token::Type::String || p.type == Token::Type::Template ||
                    p.is_punct("(") || p.is_punct("[") || p.is_punct("{") || p.is_punct("!") ||
                    p.is_punct("+") || p.is_punct("-") || p.is_punct("~");
                if (operand_ahead && !p.is_punct("=>")) {
                    Node* n = make(NodeType::AwaitExpression, cur_.start);
                    advance(true);
                    n->kids.push_back(parse_unary());
                    return finish(n);
                }
            }
        }
        return parse_postfix();
    }

    Node* parse_postfix() {
        Node* operand = parse_call_member();
        if ((cur_.is_punct("++") || cur_.is_punct("--")) && !cur_.newline_before) {
            Node* n = arena_.make(NodeType::UpdateExpression, operand->start, operand->start);
            n->str = cur_.text;
            n->kids.push_back(operand);
            advance(false);
            return finish(n);
        }
        return operand;
    }

    Node* parse_call_member() {
        Node* base;
        if (cur_.is_identifier("new"))
            base = parse_new();
        else
            base = parse_primary();
        return parse_call_member_tail(base, true);
    }

    Node* parse_call_member_tail(Node* base, bool allow_call) {
        for (;;) {
            if (cur_.is_punct(".")) {
                advance(false);
                Node* prop;
                if (cur_.type == Token::Type::PrivateName) {
                    prop = arena_.make(NodeType::PrivateName, cur_.start, cur_.end);
                    prop->str = cur_.text;
                } else if (cur_.type == Token::Type::Identifier) {
                    prop = ident_node(cur_);
                } else {
                    fail("expected property name");
                }
                advance(false);
                Node* n = arena_.make(NodeType::MemberExpression, base->start, base->start);
                n->kids.push_back(base);
                n->kids.push_back(prop);
                base = finish(n);
            } else if (cur_.is_punct("[")) {
                advance(true);
                Node* idx = parse_expression(false);
                expect("]", false);
                Node* n = arena_.make(NodeType::MemberExpression, base->start, base->start);
                n->flags |= kComputed;
                n->kids.push_back(base);
                n->kids.push_back(idx);
                base = finish(n);
            } else if (cur_.is_punct("?.")) {
                advance(false);
                if (cur_.is_punct("(")) {
                    if (!allow_call) fail("unexpected call");
                    Node* n = arena_.make(NodeType::CallExpression, base->start, base->start);
                    n->flags |= kOptionalCall;
                    n->kids.push_back(base);
                    parse_arguments_into(n);
                    base = finish(n);
                } else if (cur_.is_punct("[")) {
                    advance(true);
                    Node* idx = parse_expression(false);
                    expect("]", false);
                    Node* n = arena_.make(NodeType::MemberExpression, base->start, base->start);
                    n->flags |= kComputed | kOptionalMember;
                    n->kids.push_back(base);
                    n->kids.push_back(idx);
                    base = finish(n);
                } else if (cur_.type == Token::Type::Identifier ||
                           cur_.type == Token::Type::PrivateName) {
                    Node* prop;
                    if (cur_.type == Token::Type::PrivateName) {
                        prop = arena_.make(NodeType::PrivateName, cur_.start, cur_.end);
                        prop->str = cur_.text;
                    } else {
                        prop = ident_node(cur_);
                    }
                    advance(false);
                    Node* n = arena_.make(NodeType::MemberExpression, base->start, base->start);
                    n->flags |= kOptionalMember;
                    n->kids.push_back(base);
                    n->kids.push_back(prop);
                    base = finish(n);
                } else {
                    fail("unexpected token after '?.'");
                }
            } else if (cur_.is_punct("(") && allow_call) {
                Node* n = arena_.make(NodeType::CallExpression, base->start, base->start);
                n->kids.push_back(base);
                parse_arguments_into(n);
                base = finish(n);
            } else if (cur_.type == Token::Type::Template &&
                       (cur_.tpl == Token::TemplateKind::NoSub ||
                        cur_.tpl == Token::TemplateKind::Head)) {
                Node* quasi = parse_template_literal();
                Node* n = arena_.make(NodeType::TaggedTemplate, base->start, base->start);
                n->kids.push_back(base);
                n->kids.push_back(quasi);
                base = finish(n);
            } else {
                return base;
            }
        }
    }

    void parse_arguments_into(Node* call) {
        expect("(", true);
        while (!cur_.is_punct(")")) {
            if (cur_.is_punct("...")) {
                Node* s = make(NodeType::SpreadElement, cur_.start);
                advance(true);
                s->kids.push_back(parse_assignment(false));
                call->kids.push_back(finish(s));
            } else {
                call->kids.push_back(parse_assignment(false));
            }
            if (!cur_.is_punct(")")) expect(",", true);
        }
        advance(false);
    }

    Node* parse_new() {
        uint32_t start = cur_.start;
        advance(false);  // 'new'
        if (cur_.is_punct(".")) {
            advance(false);
            if (!cur_.is_identifier("target")) fail("expected 'target'");
            Node* n = arena_.make(NodeType::MetaProperty, start, cur_.end);
            n->str = "new.target";
            advance(false);
            return n;
        }
        Node* callee;
        if (cur_.is_identifier("new"))
            callee = parse_new();
        else
            callee = parse_primary();
        callee = parse_call_member_tail(callee, false);
        Node* n = arena_.make(NodeType::NewExpression, start, start);
        n->kids.push_back(callee);
        if (cur_.is_punct("(")) parse_arguments_into(n);
        return finish(n);
    }

    Node* parse_template_literal() {
        Node* n = make(NodeType::TemplateLiteral, cur_.start);
        if (cur_.tpl == Token::TemplateKind::NoSub) {
            advance(false);
            return finish(n);
        }
        advance(true);  // past head, into first interpolation
        for (;;) {
            n->kids.push_back(parse_expression(false));
            if (!cur_.is_punct("}")) fail("expected '}' in template literal");
            cur_ = lex_.continue_template(cur_.start);
            if (cur_.tpl == Token::TemplateKind::Middle) {
                advance(true);
                continue;
            }
            advance(false);  // past tail
            return finish(n);
        }
    }

    Node* parse_primary() {
        uint32_t start = cur_.start;
        switch (cur_.type) {
            case Token::Type::Number: {
                Node* n = arena_.make(NodeType::NumericLiteral, start, cur_.end);
                n->num = cur_.number;
                n->str = cur_.text;
                advance(false);
                return n;
            }
            case Token::Type::String: {
                Node* n = arena_.make(NodeType::StringLiteral, start, cur_.end);
                n->str = cur_.value;
                advance(false);
                return n;
            }
            case Token::Type::Regex: {
                Node* n = arena_.make(NodeType::RegexLiteral, start, cur_.end);
                n->str = cur_.text;
                advance(false);
                return n;
            }
            case Token::Type::Template:
                return parse_template_literal();
            case Token::Type::PrivateName: {
                Node* n = arena_.make(NodeType::PrivateName, start, cur_.end);
                n->str = cur_.text;
                advance(false);
                return n;
            }
            case Token::Type::Punct: {
                if (cur_.is_punct("(")) {
                    advance(true);
                    Node* inner = parse_expression(false);
                    expect(")", false);
                    return inner;
                }
                if (cur_.is_punct("[")) return parse_array_literal();
                if (cur_.is_punct("{")) return parse_object_literal();
                fail("unexpected token");
            }
            case Token::Type::Identifier: {
                const std::string& w = cur_.text;
                if (w == "function") return parse_function_literal(NodeType::FunctionExpression, start, false);
                if (w == "async" && peek().is_identifier("function") && !peek().newline_before) {
                    advance(false);
                    return parse_function_literal(NodeType::FunctionExpression, start, true);
                }
                if (w == "class") return parse_class(start, false);
                if (w == "this") {
                    Node* n = arena_.make(NodeType::ThisExpression, start, cur_.end);
                    advance(false);
                    return n;
                }
                if (w == "super") {
                    Node* n = arena_.make(NodeType::SuperExpression, start, cur_.end);
                    advance(false);
                    return n;
                }
                if (w == "null") {
                    Node* n = arena_.make(NodeType::NullLiteral, start, cur_.end);
                    advance(false);
                    return n;
                }
                if (w == "true" || w == "false") {
                    Node* n = arena_.make(NodeType::BooleanLiteral, start, cur_.end);
                    if (w == "true") n->flags |= kBoolTrue;
                    advance(false);
                    return n;
                }
                if (w == "import") {
                    advance(false);
                    if (cur_.is_punct("(")) {
                        Node* n = arena_.make(NodeType::ImportExpression, start, start);
                        parse_arguments_into(n);
                        return finish(n);
                    }
                    if (cur_.is_punct(".")) {
                        advance(false);
                        if (!cur_.is_identifier("meta")) fail("expected 'meta'");
                        Node* n = arena_.make(NodeType::MetaProperty, start, cur_.end);
                        n->str = "import.meta";
                        advance(false);
                        return n;
                    }
                    fail("unexpected 'import'");
                }
                if (is_reserved_word(w)) fail("unexpected keyword '" + w + "'");
                Node* n = ident_node(cur_);
                advance(false);
                return n;
            }
            case Token::Type::Eof:
                fail("unexpected end of input");
        }
        fail("unexpected token");
    }

    Node* parse_array_literal() {
        Node* n = make(NodeType::ArrayExpression, cur_.start);
        expect("[", true);
        while (!cur_.is_punct("]")) {
            if (cur_.is_punct(",")) {
                n->kids.push_back(nullptr);
                advance(true);
                continue;
            }
            if (cur_.is_punct("...")) {
                Node* s = make(NodeType::SpreadElement, cur_.start);
                advance(true);
                s->kids.push_back(parse_assignment(false));
                n->kids.push_back(finish(s));
            } else {
                n->kids.push_back(parse_assignment(false));
            }
            if (!cur_.is_punct("]")) expect(",", true);
        }
        advance(false);
        return finish(n);
    }

    bool is_property_key_start(const Token& t) const {
        return t.type == Token::Type::Identifier || t.type == Token::Type::String ||
               t.type == Token::Type::Number || t.type == Token::Type::PrivateName || t.is_punct("[");
    }

    // Parses a property key into a fresh node; sets kComputed on `owner`.
    Node* parse_property_key(Node* owner) {
        if (cur_.is_punct("[")) {
            owner->flags |= kComputed;
            advance(true);
            Node* k = parse_assignment(false);
            expect("]", false);
            return k;
        }
        Node* k;
        switch (cur_.type) {
            case Token::Type::Identifier:
                k = ident_node(cur_);
                break;
            case Token::Type::String:
                k = arena_.make(NodeType::StringLiteral, cur_.start, cur_.end);
                k->str = cur_.value;
                break;
            case Token::Type::Number:
                k = arena_.make(NodeType::NumericLiteral, cur_.start, cur_.end);
                k->num = cur_.number;
                k->str = cur_.text;
                break;
            case Token::Type::PrivateName:
                k = arena_.make(NodeType::PrivateName, cur_.start, cur_.end);
                k->str = cur_.text;
                break;
            default:
                fail("expected property key");
        }
        advance(false);
        return k;
    }

    Node* parse_object_literal() {
        Node* n = make(NodeType::ObjectExpression, cur_.start);
        expect("{", false);
        while (!cur_.is_punct("}")) {
            if (cur_.is_punct("...")) {
                Node* s = make(NodeType::SpreadElement, cur_.start);
                advance(true);
                s->kids.push_back(parse_assignment(false));
                n->kids.push_back(finish(s));
            } else {
                n->kids.push_back(parse_object_property());
            }
            if (!cur_.is_punct("}")) expect(",", false);
        }
        advance(false);
        return finish(n);
    }

    Node* parse_object_property() {
        Node* p = make(NodeType::Property, cur_.start);
        uint32_t member_start = cur_.start;
        bool async = false, generator = false, getter = false, setter = false;

        if (cur_.is_identifier("async") && !peek().newline_before &&
            (is_property_key_start(peek()) || peek().is_punct("*"))) {
            async = true;
            advance(false);
        }
        if (cur_.is_punct("*")) {
            generator = true;
            advance(false);
        }
        if (!async && !generator && (cur_.is_identifier("get") || cur_.is_identifier("set"))) {
            Token next = peek();
            if (is_property_key_start(next)) {
                getter = cur_.text == "get";
                setter = !getter;
                advance(false);
            }
        }

        Node* key = parse_property_key(p);
        p->kids.push_back(key);

        if (cur_.is_punct("(")) {
            p->flags |= getter ? kGetter : setter ? kSetter : kMethodProp;
            p->kids.push_back(parse_method_value(member_start, async, generator));
            return finish(p);
        }
        if (getter || setter || async || generator) fail("expected method body");
        if (eat(":", true)) {
            p->kids.push_back(parse_assignment(false));
            return finish(p);
        }
        if (key->type != NodeType::Identifier || is_reserved_word(key->str))
            fail("expected ':' after property key");
        p->flags |= kShorthand;
        if (eat("=", true)) {
            // Shorthand with default: only meaningful when this literal is
            // later reinterpreted as a destructuring pattern.
            Node* ap = arena_.make(NodeType::AssignmentPattern, key->start, key->start);
            Node* target = arena_.make(NodeType::Identifier, key->start, key->end);
            target->str = key->str;
            ap->kids.push_back(target);
            ap->kids.push_back(parse_assignment(false));
            p->kids.push_back(finish(ap));
        } else {
            Node* value = arena_.make(NodeType::Identifier, key->start, key->end);
            value->str = key->str;
            p->kids.push_back(value);
        }
        return finish(p);
    }

    // Method value: a FunctionExpression whose span covers the whole member
    // source (modifiers, key, params, body), so its identity and removal span
    // match what a reader sees in the file.
    Node* parse_method_value(uint32_t member_start, bool async, bool generator) {
        Node* fn = make(NodeType::FunctionExpression, member_start);
        fn->start = member_start;
        fn->flags |= kMethodFn;
        if (async) fn->flags |= kAsync;
        if (generator) fn->flags |= kGenerator;
        fn->kids.push_back(nullptr);  // name slot; methods are named by their key
        parse_params_into(fn);
        parse_function_body(fn, async, generator);
        return finish(fn);
    }

    Node* parse_class(uint32_t start, bool is_decl) {
        Node* n = make(is_decl ? NodeType::ClassDeclaration : NodeType::ClassExpression, start);
        advance(false);  // 'class'
        if (cur_.type == Token::Type::Identifier && !is_reserved_word(cur_.text) &&
            !cur_.is_identifier("extends")) {
            n->kids.push_back(ident_node(cur_));
            advance(false);
        } else {
            n->kids.push_back(nullptr);
        }
        if (eat_ident("extends", true))
            n->kids.push_back(parse_call_member());
        else
            n->kids.push_back(nullptr);

        Node* body = make(NodeType::ClassBody, cur_.start);
        expect("{", false);
        while (!cur_.is_punct("}")) {
            if (eat(";", false)) continue;
            body->kids.push_back(parse_class_member());
        }
        advance(false);
        n->kids.push_back(finish(body));
        return finish(n);
    }

    Node* parse_class_member() {
        uint32_t member_start = cur_.start;
        bool is_static = false, async = false, generator = false, getter = false, setter = false;

        if (cur_.is_identifier("static")) {
            Token p = peek();
            if (!p.is_punct("(") && !p.is_punct("=") && !p.is_punct(";") && !p.is_punct("}")) {
                is_static = true;
                advance(false);
            }
        }
        if (cur_.is_identifier("async")) {
            Token p = peek();
            if (!p.newline_before && !p.is_punct("(") && !p.is_punct("=") && !p.is_punct(";") &&
                !p.is_punct("}")) {
                async = true;
                advance(false);
            }
        }
        if (cur_.is_punct("*")) {
            generator = true;
            advance(false);
        }
        if (!async && !generator && (cur_.is_identifier("get") || cur_.is_identifier("set"))) {
            Token p = peek();
            if (is_property_key_start(p)) {
                getter = cur_.text == "get";
                setter = !getter;
                advance(false);
            }
        }

        Node* m = make(NodeType::MethodDefinition, member_start);
        if (is_static) m->flags |= kStaticMember;
        Node* key = parse_property_key(m);
        m->kids.push_back(key);

        if (cur_.is_punct("(")) {
            if (getter) m->flags |= kGetter;
            if (setter) m->flags |= kSetter;
            m->kids.push_back(parse_method_value(member_start, async, generator));
            return finish(m);
        }
        if (getter || setter || async || generator) fail("expected method parameters");

        m->type = NodeType::PropertyDefinition;
        if (eat("=", true))
            m->kids.push_back(parse_assignment(false));
        else
            m->kids.push_back(nullptr);
        semicolon();
        return finish(m);
    }

    // Reinterprets an expression already parsed as a literal into a pattern,
    // for destructuring assignment and for-in/of targets.
    Node* to_pattern(Node* n) {
        switch (n->type) {
            case NodeType::Identifier:
            case NodeType::MemberExpression:
                return n;
            case NodeType::ArrayExpression: {
                n->type = NodeType::ArrayPattern;
                for (Node*& k : n->kids) {
                    if (!k) continue;
                    if (k->type == NodeType::SpreadElement) {
                        k->type = NodeType::RestElement;
                        k->kids[0] = to_pattern(k->kids[0]);
                    } else {
                        k = to_pattern(k);
                    }
                }
                return n;
            }
            case NodeType::ObjectExpression: {
                n->type = NodeType::ObjectPattern;
                for (Node*& k : n->kids) {
                    if (k->type == NodeType::SpreadElement) {
                        k->type = NodeType::RestElement;
                        k->kids[0] = to_pattern(k->kids[0]);
                    } else if (k->type == NodeType::Property) {
                        if (k->flags & (kGetter | kSetter | kMethodProp))
                            throw SyntaxError{k->start, "invalid destructuring target"};
                        k->kids[1] = to_pattern(k->kids[1]);
                    }
                }
                return n;
            }
            case NodeType::AssignmentExpression: {
                if (n->str != "=") throw SyntaxError{n->start, "invalid destructuring target"};
                n->type = NodeType::AssignmentPattern;
                n->str.clear();
                n->kids[0] = to_pattern(n->kids[0]);
                return n;
            }
            case NodeType::AssignmentPattern:
            case NodeType::ArrayPattern:
            case NodeType::ObjectPattern:
            case NodeType::RestElement:
                return n;
            default:
                throw SyntaxError{n->start, "invalid assignment target"};
        }
    }

    Lexer lex_;
    Token cur_;
    uint32_t prev_end_ = 0;
    AstArena& arena_;
    bool in_async_ = false;
    bool in_generator_ = false;
    int fn_depth_ = 0;
};

}  // namespace

Node* parse_program(std::string_view source, AstArena& arena) {
    Parser p(source, arena);
    return p.parse_program();
}

}  // namespace lacuna::js
