#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lacuna::js {

struct Token {
    enum class Type {
        Eof,
        Identifier,   // includes keywords; the parser classifies by text
        PrivateName,  // #name
        Number,
        String,
        Template,
        Regex,
        Punct,
    };

    enum class TemplateKind { None, NoSub, Head, Middle, Tail };

    Type type = Type::Eof;
    uint32_t start = 0;
    uint32_t end = 0;
    bool newline_before = false;
    std::string text;   // identifier name / punctuator / raw literal text
    std::string value;  // cooked value for strings and template chunks
    double number = 0;
    TemplateKind tpl = TemplateKind::None;

    bool is_punct(std::string_view p) const { return type == Type::Punct && text == p; }
    bool is_identifier(std::string_view name) const { return type == Type::Identifier && text == name; }
};

// On-demand scanner. The caller decides, per token, whether a '/' may start
// a regular expression literal; that removes the classic regex-vs-division
// ambiguity without lexer lookbehind hacks.
class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    Token next(bool regex_allowed);

    // Re-scans from the '}' that closed a template interpolation, producing
    // the Middle or Tail chunk.
    Token continue_template(uint32_t close_brace_pos);

    uint32_t position() const { return pos_; }
    void set_position(uint32_t pos) { pos_ = pos; }

    std::string_view source() const { return src_; }

private:
    struct ScanError {
        uint32_t pos;
        std::string message;
    };

    [[noreturn]] void fail(uint32_t pos, const std::string& message) const;

    bool skip_trivia();  // returns true if a newline was crossed
    Token scan_token(bool regex_allowed, bool newline_before);
    Token scan_identifier(uint32_t start, bool newline_before);
    Token scan_number(uint32_t start, bool newline_before);
    Token scan_string(uint32_t start, bool newline_before);
    Token scan_regex(uint32_t start, bool newline_before);
    Token scan_template(uint32_t start, bool newline_before);
    Token scan_punct(uint32_t start, bool newline_before);

    char at(uint32_t i) const { return i < src_.size() ? src_[i] : '\0'; }
    bool eof(uint32_t i) const { return i >= src_.size(); }

    std::string_view src_;
    uint32_t pos_ = 0;
    bool at_line_start_ = true;
};

// Thrown by Lexer and Parser on malformed input; carries the byte offset.
struct SyntaxError {
    uint32_t pos = 0;
    std::string message;
};

bool is_identifier_start(unsigned char c);
bool is_identifier_part(unsigned char c);

}  // namespace lacuna::js
