#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>

#include "lacuna/fetch.hpp"
#include "lacuna/fsutil.hpp"
#include "lacuna/js/parser.hpp"
#include "lacuna/sources.hpp"

namespace fs = std::filesystem;

namespace lacuna {

namespace {

// Paths whose any segment starts with "_lacuna" are tool outputs, never inputs.
bool is_reserved_path(const std::string& rel) {
    size_t start = 0;
    while (start <= rel.size()) {
        size_t slash = rel.find('/', start);
        std::string_view seg(rel.data() + start,
                             (slash == std::string::npos ? rel.size() : slash) - start);
        if (seg.rfind("_lacuna", 0) == 0) return true;
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    return false;
}

std::string strip_ref_suffix(const std::string& src) {
    size_t cut = src.find_first_of("?#");
    return cut == std::string::npos ? src : src.substr(0, cut);
}

std::string relative_from_html(const std::string& html_app_path, const std::string& target_app_path) {
    fs::path html_dir = fs::path(html_app_path).parent_path();
    return fs::path(target_app_path).lexically_relative(html_dir.empty() ? "." : html_dir)
        .generic_string();
}

}  // namespace

AppInventory discover_app(const fs::path& root, const DiscoveryOptions& opts) {
    if (!fs::exists(root) || !fs::is_directory(root))
        throw Error("discovery", "app root is not a directory: " + root.string());

    AppInventory inv;
    inv.root = fs::absolute(root);

    std::map<std::string, size_t> source_by_path;
    std::map<std::string, size_t> source_by_url;

    auto add_source = [&](SourceFile&& s) -> size_t {
        size_t idx = inv.sources.size();
        source_by_path[s.app_path] = idx;
        inv.sources.push_back(std::move(s));
        return idx;
    };

    for (const std::string& rel : fsutil::list_files(inv.root, {".html", ".htm"})) {
        if (is_reserved_path(rel)) continue;
        fs::path disk = inv.root / rel;
        HtmlDoc doc;
        doc.app_path = rel;
        doc.text = fsutil::read_file(disk);
        doc.tags = scan_html_scripts(doc.text);
        doc.tag_source.assign(doc.tags.size(), kNoIndex);
        doc.tag_new_src.assign(doc.tags.size(), "");
        inv.html.push_back(std::move(doc));
    }

    for (size_t h = 0; h < inv.html.size(); h++) {
        HtmlDoc& doc = inv.html[h];
        size_t inline_index = 0;
        for (size_t t = 0; t < doc.tags.size(); t++) {
            const ScriptTag& tag = doc.tags[t];
            if (!tag.is_javascript) continue;

            if (tag.inline_script) {
                SourceFile s;
                s.app_path = doc.app_path + "#inline-" + std::to_string(inline_index++);
                s.inline_html = true;
                s.html_index = h;
                s.html_start = tag.content_start;
                s.html_end = tag.content_end;
                s.text = doc.text.substr(tag.content_start, tag.content_end - tag.content_start);
                doc.tag_source[t] = add_source(std::move(s));
                continue;
            }

            if (is_remote_url(tag.src)) {
                std::string url = tag.src.rfind("//", 0) == 0 ? "http:" + tag.src : tag.src;
                auto seen = source_by_url.find(url);
                if (seen != source_by_url.end()) {
                    doc.tag_source[t] = seen->second;
                    doc.tag_new_src[t] =
                        relative_from_html(doc.app_path, inv.sources[seen->second].app_path);
                    continue;
                }
                if (!opts.fetch_remote) {
                    inv.diagnostics.push_back({doc.app_path, "remote script not fetched: " + tag.src});
                    continue;
                }
                std::string body;
                try {
                    body = http_get(url, opts.timeout_seconds);
                } catch (const Error& e) {
                    inv.diagnostics.push_back({doc.app_path, std::string("remote script unavailable: ") + e.what()});
                    continue;
                }
                std::string app_path = remote_app_path(url);
                if (auto clash = source_by_path.find(app_path);
                    clash != source_by_path.end() && inv.sources[clash->second].url != url) {
                    // Distinct URLs mapping to one storage path: keep both.
                    uint32_t hv = 2166136261u;
                    for (unsigned char c : url) {
                        hv ^= c;
                        hv *= 16777619u;
                    }
                    char buf[16];
                    std::snprintf(buf, sizeof buf, "_%08x", hv);
                    size_t dot = app_path.rfind('.');
                    size_t slash = app_path.rfind('/');
                    if (dot != std::string::npos && dot > slash)
                        app_path.insert(dot, buf);
                    else
                        app_path += buf;
                }
                SourceFile s;
                s.app_path = app_path;
                s.remote = true;
                s.url = url;
                s.text = std::move(body);
                size_t idx = add_source(std::move(s));
                source_by_url[url] = idx;
                doc.tag_source[t] = idx;
                doc.tag_new_src[t] = relative_from_html(doc.app_path, app_path);
                continue;
            }

            // Local reference, relative to the HTML file (or the app root
            // when the path starts with '/').
            std::string ref = strip_ref_suffix(tag.src);
            if (ref.empty()) continue;
            fs::path resolved;
            if (ref[0] == '/')
                resolved = inv.root / ref.substr(1);
            else
                resolved = inv.root / fs::path(doc.app_path).parent_path() / ref;
            resolved = resolved.lexically_normal();
            if (!fsutil::is_within(inv.root, resolved)) {
                inv.diagnostics.push_back({doc.app_path, "script reference escapes the app root: " + tag.src});
                continue;
            }
            if (!fs::exists(resolved)) {
                inv.diagnostics.push_back({doc.app_path, "referenced script missing: " + tag.src});
                continue;
            }
            std::string rel = fsutil::app_relative(inv.root, resolved);
            auto seen = source_by_path.find(rel);
            if (seen != source_by_path.end()) {
                doc.tag_source[t] = seen->second;
                continue;
            }
            SourceFile s;
            s.app_path = rel;
            s.text = fsutil::read_file(resolved);
            doc.tag_source[t] = add_source(std::move(s));
        }
    }

    for (const std::string& rel : fsutil::list_files(inv.root, {".js", ".mjs"})) {
        if (is_reserved_path(rel)) continue;
        if (source_by_path.count(rel)) continue;
        SourceFile s;
        s.app_path = rel;
        s.text = fsutil::read_file(inv.root / rel);
        add_source(std::move(s));
    }

    for (SourceFile& s : inv.sources) {
        s.arena = std::make_shared<js::AstArena>();
        try {
            s.program = js::parse_program(s.text, *s.arena);
        } catch (const js::SyntaxError& e) {
            s.parse_error = e.message + " at byte " + std::to_string(e.pos);
            inv.diagnostics.push_back({s.app_path, s.parse_error});
        }
    }

    inv.scopes = std::make_shared<js::ScopeModel>();
    for (const SourceFile& s : inv.sources)
        if (s.program) inv.scopes->add_program(s.program);
    for (const SourceFile& s : inv.sources)
        if (s.program) inv.scopes->analyze_program(s.program);

    index_functions(inv);
    return inv;
}

}  // namespace lacuna
