#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

namespace lacuna::js {

enum class NodeType {
    Program,

    // Statements
    ExpressionStatement,
    BlockStatement,
    EmptyStatement,
    VariableDeclaration,  // str = "var" | "let" | "const"; kids = declarators
    VariableDeclarator,   // kids = [pattern, init?]
    FunctionDeclaration,
    ReturnStatement,
    IfStatement,          // kids = [test, consequent, alternate?]
    ForStatement,         // kids = [init?, test?, update?, body]
    ForInStatement,       // kids = [left, right, body]; flags kForOf distinguishes for-of
    WhileStatement,       // kids = [test, body]
    DoWhileStatement,     // kids = [body, test]
    BreakStatement,       // str = label or empty
    ContinueStatement,    // str = label or empty
    LabeledStatement,     // str = label; kids = [body]
    SwitchStatement,      // kids = [discriminant, case...]
    SwitchCase,           // kids = [test?, stmt...]
    ThrowStatement,
    TryStatement,         // kids = [block, handler?, finalizer?]
    CatchClause,          // kids = [param?, body]
    DebuggerStatement,
    WithStatement,        // kids = [object, body]
    ClassDeclaration,
    ImportDeclaration,    // str = module specifier; kids = specifier idents
    ExportNamedDeclaration,    // kids = [declaration?]; str = source or empty
    ExportDefaultDeclaration,  // kids = [declaration]
    ExportAllDeclaration,      // str = source

    // Expressions
    Identifier,       // str = name
    PrivateName,      // str = name (without '#')
    ThisExpression,
    SuperExpression,
    NullLiteral,
    BooleanLiteral,   // flags kBoolTrue
    NumericLiteral,   // num
    StringLiteral,    // str = cooked value
    RegexLiteral,     // str = raw text
    TemplateLiteral,  // kids = interpolated expressions
    TaggedTemplate,   // kids = [tag, quasi]
    ArrayExpression,  // kids = elements (nullptr for holes)
    ObjectExpression, // kids = properties
    Property,         // kids = [key, value]; flags: kComputed, kShorthand, kGetter, kSetter, kMethodProp
    SpreadElement,    // kids = [argument]
    FunctionExpression,
    ArrowFunction,
    ClassExpression,
    ClassBody,        // kids = members
    MethodDefinition, // kids = [key, value(function)]; flags: kComputed, kStaticMember, kGetter, kSetter
    PropertyDefinition,  // class field; kids = [key, value?]
    SequenceExpression,
    AssignmentExpression,  // str = operator; kids = [target, value]
    ConditionalExpression, // kids = [test, consequent, alternate]
    LogicalExpression,     // str = "&&" | "||" | "??"
    BinaryExpression,      // str = operator
    UnaryExpression,       // str = operator; prefix
    UpdateExpression,      // str = "++" | "--"; flags kPrefix
    CallExpression,        // kids = [callee, arg...]; flags kOptionalCall
    NewExpression,         // kids = [callee, arg...]
    MemberExpression,      // kids = [object, property]; flags kComputed, kOptionalMember
    YieldExpression,       // kids = [argument?]; flags kDelegate
    AwaitExpression,
    MetaProperty,          // str = "new.target" | "import.meta"
    ImportExpression,      // dynamic import(); kids = [argument]

    // Patterns
    ObjectPattern,    // kids = properties (Property with pattern values, RestElement)
    ArrayPattern,     // kids = elements (nullptr holes, RestElement)
    AssignmentPattern,  // kids = [target, default]
    RestElement,      // kids = [argument]
};

// Bit flags stored on Node::flags.
inline constexpr uint32_t kComputed = 1u << 0;
inline constexpr uint32_t kShorthand = 1u << 1;
inline constexpr uint32_t kGetter = 1u << 2;
inline constexpr uint32_t kSetter = 1u << 3;
inline constexpr uint32_t kMethodProp = 1u << 4;
inline constexpr uint32_t kStaticMember = 1u << 5;
inline constexpr uint32_t kPrefix = 1u << 6;
inline constexpr uint32_t kOptionalCall = 1u << 7;
inline constexpr uint32_t kOptionalMember = 1u << 8;
inline constexpr uint32_t kAsync = 1u << 9;
inline constexpr uint32_t kGenerator = 1u << 10;
inline constexpr uint32_t kForOf = 1u << 11;
inline constexpr uint32_t kBoolTrue = 1u << 12;
inline constexpr uint32_t kDelegate = 1u << 13;
inline constexpr uint32_t kArrowExprBody = 1u << 14;  // arrow with expression body
inline constexpr uint32_t kMethodFn = 1u << 15;       // function born as a method value

struct Node {
    NodeType type;
    uint32_t start = 0;  // byte offset, inclusive
    uint32_t end = 0;    // byte offset, exclusive
    uint32_t flags = 0;
    std::string str;
    double num = 0;
    std::vector<Node*> kids;  // fixed-slot children may be nullptr

    // For functions: the byte span of the body interior. For brace bodies this
    // is the range strictly between '{' and '}'. For arrow expression bodies it
    // is the expression span itself.
    uint32_t body_interior_start = 0;
    uint32_t body_interior_end = 0;

    bool is_function() const {
        return type == NodeType::FunctionDeclaration || type == NodeType::FunctionExpression ||
               type == NodeType::ArrowFunction;
    }
};

// Function node layout, all three kinds: kids[0] = name Identifier or nullptr,
// kids[1..n] = params (patterns), kids.back() = body (BlockStatement, or an
// expression for kArrowExprBody arrows).
inline Node* function_name(const Node* fn) { return fn->kids[0]; }
inline Node* function_body(const Node* fn) { return fn->kids.back(); }
inline size_t function_param_count(const Node* fn) { return fn->kids.size() - 2; }
inline Node* function_param(const Node* fn, size_t i) { return fn->kids[i + 1]; }

// Owns every node of one parse; nodes are stable for the arena's lifetime.
class AstArena {
public:
    Node* make(NodeType type, uint32_t start, uint32_t end) {
        nodes_.push_back(Node{});
        Node* n = &nodes_.back();
        n->type = type;
        n->start = start;
        n->end = end;
        return n;
    }
    size_t size() const { return nodes_.size(); }

private:
    std::deque<Node> nodes_;
};

}  // namespace lacuna::js
