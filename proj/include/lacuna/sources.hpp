#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "lacuna/cg.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/html.hpp"
#include "lacuna/js/ast.hpp"
#include "lacuna/js/scope.hpp"

namespace lacuna {

// One JavaScript source: a .js file, a fetched remote script, or the text of
// an inline script tag.
struct SourceFile {
    std::string app_path;  // app-relative, '/'-separated; inline: "<html>#inline-<k>"
    bool inline_html = false;
    size_t html_index = static_cast<size_t>(-1);
    uint32_t html_start = 0;  // inline: content span within the HTML document
    uint32_t html_end = 0;
    bool remote = false;
    std::string url;  // origin of fetched scripts
    std::string text;
    std::shared_ptr<js::AstArena> arena;
    const js::Node* program = nullptr;  // null when the parse failed
    std::string parse_error;
};

struct HtmlDoc {
    std::string app_path;
    std::string text;
    std::vector<ScriptTag> tags;
    std::vector<size_t> tag_source;        // per tag: source index, or SIZE_MAX
    std::vector<std::string> tag_new_src;  // per tag: replacement src value, "" = keep
};

struct FunctionInfo {
    FunctionId id;
    FunctionKind kind = FunctionKind::Declaration;
    std::string name;  // "" renders as null
    const js::Node* node = nullptr;
    size_t source_index = static_cast<size_t>(-1);
};

constexpr size_t kNoIndex = static_cast<size_t>(-1);

struct AppInventory {
    std::filesystem::path root;
    std::vector<HtmlDoc> html;
    std::vector<SourceFile> sources;
    std::vector<FunctionInfo> functions;  // [0] is always the global root
    std::unordered_map<const js::Node*, size_t> fn_by_node;
    std::map<FunctionId, size_t> fn_by_id;
    std::shared_ptr<js::ScopeModel> scopes;
    DiagnosticList diagnostics;

    size_t index_of(const js::Node* fn) const {
        auto it = fn_by_node.find(fn);
        return it == fn_by_node.end() ? kNoIndex : it->second;
    }
    size_t index_of(const FunctionId& id) const {
        auto it = fn_by_id.find(id);
        return it == fn_by_id.end() ? kNoIndex : it->second;
    }
};

struct DiscoveryOptions {
    bool fetch_remote = true;
    int timeout_seconds = 10;
};

// Walks an app directory, collects and parses every script (files, inline
// tags, fetched remote scripts), builds the scope model and the function
// inventory. Per-source failures become diagnostics, not errors.
AppInventory discover_app(const std::filesystem::path& root, const DiscoveryOptions& opts = {});

// Fills inventory.functions / fn_by_node / fn_by_id / scopes from the parsed
// sources. Called by discover_app; exposed for tests.
void index_functions(AppInventory& inv);

// The constructor method's function value, or null.
const js::Node* class_constructor(const js::Node* cls);

}  // namespace lacuna
