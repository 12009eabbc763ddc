#include "lacuna/js/lexer.hpp"

#include <cmath>
#include <cstdlib>

namespace lacuna::js {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

void append_code_point(std::string& out, uint32_t cp) {
    if (cp <= 0x7f) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

// Longest-match table, ordered so prefixes come after their extensions.
const std::string_view kPuncts[] = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
    "=>", "**", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "??",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/", "%",
    "&", "|", "^", "!", "~", "?", ":", "=", ".",
};

}  // namespace

bool is_identifier_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' ||
           c >= 0x80;  // lenient: any non-ASCII byte continues an identifier
}

bool is_identifier_part(unsigned char c) {
    return is_identifier_start(c) || (c >= '0' && c <= '9');
}

void Lexer::fail(uint32_t pos, const std::string& message) const {
    throw SyntaxError{pos, message};
}

bool Lexer::skip_trivia() {
    bool newline = false;
    for (;;) {
        char c = at(pos_);
        if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
            pos_++;
        } else if (c == '\n' || c == '\r') {
            newline = true;
            at_line_start_ = true;
            pos_++;
        } else if (c == '/' && at(pos_ + 1) == '/') {
            pos_ += 2;
            while (!eof(pos_) && at(pos_) != '\n' && at(pos_) != '\r') pos_++;
        } else if (c == '/' && at(pos_ + 1) == '*') {
            uint32_t open = pos_;
            pos_ += 2;
            for (;;) {
                if (eof(pos_)) fail(open, "unterminated block comment");
                if (at(pos_) == '*' && at(pos_ + 1) == '/') {
                    pos_ += 2;
                    break;
                }
                if (at(pos_) == '\n' || at(pos_) == '\r') newline = true;
                pos_++;
            }
        } else if (c == '<' && at(pos_ + 1) == '!' && at(pos_ + 2) == '-' && at(pos_ + 3) == '-') {
            // HTML open-comment: rest of line is a comment (legacy web script syntax).
            pos_ += 4;
            while (!eof(pos_) && at(pos_) != '\n' && at(pos_) != '\r') pos_++;
        } else if (c == '-' && at(pos_ + 1) == '-' && at(pos_ + 2) == '>' &&
                   (newline || at_line_start_)) {
            // HTML close-comment at line start: comment to end of line.
            pos_ += 3;
            while (!eof(pos_) && at(pos_) != '\n' && at(pos_) != '\r') pos_++;
        } else if (static_cast<unsigned char>(c) == 0xe2 &&
                   static_cast<unsigned char>(at(pos_ + 1)) == 0x80 &&
                   (static_cast<unsigned char>(at(pos_ + 2)) == 0xa8 ||
                    static_cast<unsigned char>(at(pos_ + 2)) == 0xa9)) {
            // U+2028 / U+2029 count as line terminators.
            newline = true;
            at_line_start_ = true;
            pos_ += 3;
        } else if (static_cast<unsigned char>(c) == 0xef &&
                   static_cast<unsigned char>(at(pos_ + 1)) == 0xbb &&
                   static_cast<unsigned char>(at(pos_ + 2)) == 0xbf) {
            pos_ += 3;  // BOM
        } else if (static_cast<unsigned char>(c) == 0xc2 &&
                   static_cast<unsigned char>(at(pos_ + 1)) == 0xa0) {
            pos_ += 2;  // NBSP
        } else {
            break;
        }
    }
    return newline;
}

Token Lexer::next(bool regex_allowed) {
    bool newline = skip_trivia();
    if (eof(pos_)) {
        Token t;
        t.type = Token::Type::Eof;
        t.start = t.end = pos_;
        t.newline_before = newline;
        return t;
    }
    at_line_start_ = false;
    return scan_token(regex_allowed, newline);
}

Token Lexer::scan_token(bool regex_allowed, bool newline_before) {
    uint32_t start = pos_;
    char c = at(pos_);

    if (is_identifier_start(static_cast<unsigned char>(c))) return scan_identifier(start, newline_before);
    if (is_digit(c) || (c == '.' && is_digit(at(pos_ + 1)))) return scan_number(start, newline_before);
    if (c == '"' || c == '\'') return scan_string(start, newline_before);
    if (c == '`') return scan_template(start, newline_before);
    if (c == '/' && regex_allowed) return scan_regex(start, newline_before);
    if (c == '#') {
        pos_++;
        if (!is_identifier_start(static_cast<unsigned char>(at(pos_)))) fail(start, "expected name after '#'");
        while (is_identifier_part(static_cast<unsigned char>(at(pos_)))) pos_++;
        Token t;
        t.type = Token::Type::PrivateName;
        t.start = start;
        t.end = pos_;
        t.newline_before = newline_before;
        t.text = std::string(src_.substr(start + 1, pos_ - start - 1));
        return t;
    }
    return scan_punct(start, newline_before);
}

Token Lexer::scan_identifier(uint32_t start, bool newline_before) {
    while (is_identifier_part(static_cast<unsigned char>(at(pos_)))) pos_++;
    Token t;
    t.type = Token::Type::Identifier;
    t.start = start;
    t.end = pos_;
    t.newline_before = newline_before;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
}

Token Lexer::scan_number(uint32_t start, bool newline_before) {
    auto digits = [&](auto pred) {
        bool any = false;
        for (;;) {
            char c = at(pos_);
            if (pred(c)) {
                any = true;
                pos_++;
            } else if (c == '_' && pred(at(pos_ + 1))) {
                pos_++;  // numeric separator
            } else {
                break;
            }
        }
        return any;
    };

    if (at(pos_) == '0' && (at(pos_ + 1) == 'x' || at(pos_ + 1) == 'X')) {
        pos_ += 2;
        if (!digits(is_hex)) fail(start, "malformed hex literal");
    } else if (at(pos_) == '0' && (at(pos_ + 1) == 'o' || at(pos_ + 1) == 'O')) {
        pos_ += 2;
        if (!digits([](char c) { return c >= '0' && c <= '7'; })) fail(start, "malformed octal literal");
    } else if (at(pos_) == '0' && (at(pos_ + 1) == 'b' || at(pos_ + 1) == 'B')) {
        pos_ += 2;
        if (!digits([](char c) { return c == '0' || c == '1'; })) fail(start, "malformed binary literal");
    } else {
        digits(is_digit);
        if (at(pos_) == '.') {
            pos_++;
            digits(is_digit);
        }
        if (at(pos_) == 'e' || at(pos_) == 'E') {
            uint32_t save = pos_;
            pos_++;
            if (at(pos_) == '+' || at(pos_) == '-') pos_++;
            if (!digits(is_digit)) pos_ = save;
        }
    }
    if (at(pos_) == 'n') pos_++;  // bigint suffix
    if (is_identifier_start(static_cast<unsigned char>(at(pos_)))) fail(pos_, "identifier after number");

    Token t;
    t.type = Token::Type::Number;
    t.start = start;
    t.end = pos_;
    t.newline_before = newline_before;
    t.text = std::string(src_.substr(start, pos_ - start));
    {
        std::string plain;
        for (char c : t.text)
            if (c != '_' && c != 'n') plain.push_back(c);
        t.number = std::strtod(plain.c_str(), nullptr);
    }
    return t;
}

Token Lexer::scan_string(uint32_t start, bool newline_before) {
    char quote = at(pos_);
    pos_++;
    std::string value;
    for (;;) {
        if (eof(pos_)) fail(start, "unterminated string");
        char c = at(pos_);
        if (c == quote) {
            pos_++;
            break;
        }
        if (c == '\n' || c == '\r') fail(start, "unterminated string");
        if (c == '\\') {
            pos_++;
            char e = at(pos_);
            switch (e) {
                case 'n': value.push_back('\n'); pos_++; break;
                case 't': value.push_back('\t'); pos_++; break;
                case 'r': value.push_back('\r'); pos_++; break;
                case 'b': value.push_back('\b'); pos_++; break;
                case 'f': value.push_back('\f'); pos_++; break;
                case 'v': value.push_back('\v'); pos_++; break;
                case '\n': pos_++; break;  // line continuation
                case '\r':
                    pos_++;
                    if (at(pos_) == '\n') pos_++;
                    break;
                case 'x': {
                    if (!is_hex(at(pos_ + 1)) || !is_hex(at(pos_ + 2))) fail(pos_, "malformed \\x escape");
                    append_code_point(value, static_cast<uint32_t>(hex_value(at(pos_ + 1)) * 16 + hex_value(at(pos_ + 2))));
                    pos_ += 3;
                    break;
                }
                case 'u': {
                    pos_++;
                    if (at(pos_) == '{') {
                        pos_++;
                        uint32_t cp = 0;
                        bool any = false;
                        while (is_hex(at(pos_))) {
                            cp = cp * 16 + static_cast<uint32_t>(hex_value(at(pos_)));
                            pos_++;
                            any = true;
                        }
                        if (!any || at(pos_) != '}' || cp > 0x10ffff) fail(pos_, "malformed \\u{} escape");
                        pos_++;
                        append_code_point(value, cp);
                    } else {
                        uint32_t cp = 0;
                        for (int i = 0; i < 4; i++) {
                            if (!is_hex(at(pos_))) fail(pos_, "malformed \\u escape");
                            cp = cp * 16 + static_cast<uint32_t>(hex_value(at(pos_)));
                            pos_++;
                        }
                        append_code_point(value, cp);
                    }
                    break;
                }
                default:
                    if (e >= '0' && e <= '7') {
                        // Legacy octal escape (sloppy mode).
                        uint32_t cp = 0;
                        int n = 0;
                        while (n < 3 && at(pos_) >= '0' && at(pos_) <= '7' && cp * 8 + (at(pos_) - '0') <= 255) {
                            cp = cp * 8 + static_cast<uint32_t>(at(pos_) - '0');
                            pos_++;
                            n++;
                        }
                        append_code_point(value, cp);
                    } else {
                        value.push_back(e);
                        pos_++;
                    }
            }
        } else {
            value.push_back(c);
            pos_++;
        }
    }
    Token t;
    t.type = Token::Type::String;
    t.start = start;
    t.end = pos_;
    t.newline_before = newline_before;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.value = std::move(value);
    return t;
}

Token Lexer::scan_regex(uint32_t start, bool newline_before) {
    pos_++;  // leading '/'
    bool in_class = false;
    for (;;) {
        if (eof(pos_)) fail(start, "unterminated regex");
        char c = at(pos_);
        if (c == '\n' || c == '\r') fail(start, "unterminated regex");
        if (c == '\\') {
            pos_ += 2;
            continue;
        }
        if (c == '[') in_class = true;
        else if (c == ']') in_class = false;
        else if (c == '/' && !in_class) {
            pos_++;
            break;
        }
        pos_++;
    }
    while (is_identifier_part(static_cast<unsigned char>(at(pos_)))) pos_++;  // flags
    Token t;
    t.type = Token::Type::Regex;
    t.start = start;
    t.end = pos_;
    t.newline_before = newline_before;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
}

Token Lexer::scan_template(uint32_t start, bool newline_before) {
    // pos_ is at '`' for a fresh template, at '}' for a continuation.
    bool head = at(pos_) == '`';
    pos_++;
    std::string value;
    for (;;) {
        if (eof(pos_)) fail(start, "unterminated template literal");
        char c = at(pos_);
        if (c == '`') {
            pos_++;
            Token t;
            t.type = Token::Type::Template;
            t.tpl = head ? Token::TemplateKind::NoSub : Token::TemplateKind::Tail;
            t.start = start;
            t.end = pos_;
            t.newline_before = newline_before;
            t.value = std::move(value);
            return t;
        }
        if (c == '$' && at(pos_ + 1) == '{') {
            pos_ += 2;
            Token t;
            t.type = Token::Type::Template;
            t.tpl = head ? Token::TemplateKind::Head : Token::TemplateKind::Middle;
            t.start = start;
            t.end = pos_;
            t.newline_before = newline_before;
            t.value = std::move(value);
            return t;
        }
        if (c == '\\') {
            // Cooked value is irrelevant for call analysis; keep the raw bytes.
            value.push_back(c);
            if (!eof(pos_ + 1)) value.push_back(at(pos_ + 1));
            pos_ += 2;
            continue;
        }
        value.push_back(c);
        pos_++;
    }
}

Token Lexer::continue_template(uint32_t close_brace_pos) {
    pos_ = close_brace_pos;
    return scan_template(close_brace_pos, false);
}

Token Lexer::scan_punct(uint32_t start, bool newline_before) {
    for (std::string_view p : kPuncts) {
        if (src_.compare(start, p.size(), p) == 0) {
            // '?.' only when not followed by a digit ('x?.5:y' is a ternary).
            if (p == "?" && at(start + 1) == '.' && !is_digit(at(start + 2))) {
                pos_ = start + 2;
                Token t;
                t.type = Token::Type::Punct;
                t.start = start;
                t.end = pos_;
                t.newline_before = newline_before;
                t.text = "?.";
                return t;
            }
            pos_ = start + static_cast<uint32_t>(p.size());
            Token t;
            t.type = Token::Type::Punct;
            t.start = start;
            t.end = pos_;
            t.newline_before = newline_before;
            t.text = std::string(p);
            return t;
        }
    }
    fail(start, "unexpected character");
}

}  // namespace lacuna::js
