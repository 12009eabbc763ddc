#include "lacuna/html.hpp"

#include <algorithm>
#include <cctype>

namespace lacuna {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool starts_with_ci(std::string_view s, size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > s.size()) return false;
    for (size_t i = 0; i < prefix.size(); i++)
        if (lower(s[pos + i]) != prefix[i]) return false;
    return true;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool is_js_type(std::string_view type) {
    if (type.empty()) return true;
    return type == "text/javascript" || type == "application/javascript" ||
           type == "application/x-javascript" || type == "text/ecmascript" ||
           type == "application/ecmascript" || type == "module";
}

struct Attr {
    std::string name;
    std::string value;
    uint32_t value_start = 0;
    uint32_t value_end = 0;
};

// Parses attributes from `pos` until '>' or EOF; leaves pos past '>'.
std::vector<Attr> parse_attrs(std::string_view html, size_t& pos) {
    std::vector<Attr> attrs;
    while (pos < html.size() && html[pos] != '>') {
        while (pos < html.size() && (is_space(html[pos]) || html[pos] == '/')) pos++;
        if (pos >= html.size() || html[pos] == '>') break;
        Attr a;
        while (pos < html.size() && !is_space(html[pos]) && html[pos] != '=' && html[pos] != '>' &&
               html[pos] != '/')
            a.name.push_back(lower(html[pos++]));
        while (pos < html.size() && is_space(html[pos])) pos++;
        if (pos < html.size() && html[pos] == '=') {
            pos++;
            while (pos < html.size() && is_space(html[pos])) pos++;
            if (pos < html.size() && (html[pos] == '"' || html[pos] == '\'')) {
                char q = html[pos++];
                a.value_start = static_cast<uint32_t>(pos);
                while (pos < html.size() && html[pos] != q) a.value.push_back(html[pos++]);
                a.value_end = static_cast<uint32_t>(pos);
                if (pos < html.size()) pos++;
            } else {
                a.value_start = static_cast<uint32_t>(pos);
                while (pos < html.size() && !is_space(html[pos]) && html[pos] != '>')
                    a.value.push_back(html[pos++]);
                a.value_end = static_cast<uint32_t>(pos);
            }
        }
        if (!a.name.empty()) attrs.push_back(std::move(a));
    }
    if (pos < html.size()) pos++;  // '>'
    return attrs;
}

}  // namespace

std::vector<ScriptTag> scan_html_scripts(std::string_view html) {
    std::vector<ScriptTag> tags;
    size_t pos = 0;
    while (pos < html.size()) {
        if (html[pos] != '<') {
            pos++;
            continue;
        }
        if (starts_with_ci(html, pos, "<!--")) {
            size_t close = html.find("-->", pos + 4);
            pos = close == std::string_view::npos ? html.size() : close + 3;
            continue;
        }
        if (!starts_with_ci(html, pos, "<script")) {
            pos++;
            continue;
        }
        char after = pos + 7 < html.size() ? html[pos + 7] : '\0';
        if (!is_space(after) && after != '>' && after != '/') {
            pos++;
            continue;
        }

        ScriptTag tag;
        tag.tag_start = static_cast<uint32_t>(pos);
        size_t p = pos + 7;
        std::vector<Attr> attrs = parse_attrs(html, p);
        for (const Attr& a : attrs) {
            if (a.name == "src") {
                tag.src = a.value;
                tag.src_value_start = a.value_start;
                tag.src_value_end = a.value_end;
            } else if (a.name == "type") {
                tag.type = a.value;
                std::transform(tag.type.begin(), tag.type.end(), tag.type.begin(), lower);
            }
        }
        tag.is_javascript = is_js_type(tag.type);

        // Find the closing tag; scripts without one run to end of document.
        size_t content_start = p;
        size_t close = content_start;
        while (close < html.size() && !starts_with_ci(html, close, "</script")) close++;
        size_t content_end = close;
        if (close < html.size()) {
            close += 8;
            while (close < html.size() && html[close] != '>') close++;
            if (close < html.size()) close++;
        }

        if (tag.src.empty()) {
            tag.inline_script = true;
            tag.content_start = static_cast<uint32_t>(content_start);
            tag.content_end = static_cast<uint32_t>(content_end);
            tag.tag_end = static_cast<uint32_t>(close);
        } else {
            tag.inline_script = false;
            tag.tag_end = static_cast<uint32_t>(p);
        }
        size_t next = tag.inline_script ? close : p;
        tags.push_back(std::move(tag));
        pos = next;
    }
    return tags;
}

}  // namespace lacuna
