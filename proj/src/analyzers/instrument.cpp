#include <json.hpp>
#include <string>
#include <vector>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/edits.hpp"
#include "lacuna/emit.hpp"
#include "lacuna/fsutil.hpp"

namespace lacuna {

namespace {

using js::Node;
using js::NodeType;

constexpr const char* kMarker = "/*__lacuna_probes__*/";

// Shadow-stack bookkeeping shared by every instrumented script. Defined once
// per page; later scripts see the existing instance. Timer callbacks re-enter
// with the scheduling function pushed so their calls attribute to it.
const char* kPrelude = R"JS(/*__lacuna_probes__*/
var __lacuna__ = (typeof __lacuna__ !== "undefined") ? __lacuna__ : (function () {
  var ROOT = "<global>[0:0]";
  var stack = [];
  var seen = Object.create(null);
  var lines = [];
  function top() { return stack.length ? stack[stack.length - 1] : ROOT; }
  var api = {
    enter: function (id) {
      var key = top() + " " + id;
      if (!seen[key]) {
        seen[key] = true;
        lines.push("CALL " + key);
      }
      stack.push(id);
    },
    exit: function () { stack.pop(); },
    text: function () { return lines.length ? lines.join("\n") + "\n" : ""; }
  };
  var g = (typeof globalThis !== "undefined") ? globalThis :
          (typeof window !== "undefined") ? window :
          (typeof global !== "undefined") ? global : this;
  function wrapTimer(name) {
    var native = g[name];
    if (typeof native !== "function") return;
    g[name] = function (cb) {
      var args = Array.prototype.slice.call(arguments);
      if (typeof cb === "function") {
        var scheduler = top();
        args[0] = function () {
          stack.push(scheduler);
          try { return cb.apply(this, arguments); }
          finally { stack.pop(); }
        };
      }
      return native.apply(g, args);
    };
  }
  wrapTimer("setTimeout");
  wrapTimer("setInterval");
  return api;
})();
)JS";

std::string js_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\' || c == '"') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Skips a directive prologue so inserted statements never displace
// "use strict".
uint32_t after_directives(const std::vector<Node*>& stmts, uint32_t dflt) {
    uint32_t pos = dflt;
    for (const Node* s : stmts) {
        if (!s || s->type != NodeType::ExpressionStatement ||
            s->kids[0]->type != NodeType::StringLiteral)
            break;
        pos = s->end;
    }
    return pos;
}

// Same-position ordering: openers first (outer before inner), then closers
// (inner before outer).
constexpr int kCloserBase = 1000000;

void probe_functions(const Node* n, const SourceFile& src, const AppInventory& inv,
                     EditList& edits, int depth) {
    if (!n) return;
    if (n->is_function()) {
        ++depth;
        size_t idx = inv.index_of(n);
        if (idx != kNoIndex) {
            std::string id = js_escape(inv.functions[idx].id.canonical());
            if (n->flags & js::kArrowExprBody) {
                edits.insert(n->body_interior_start,
                             "{__lacuna__.enter(\"" + id + "\");try{return (", depth);
                edits.insert(n->body_interior_end, ");}finally{__lacuna__.exit();}}",
                             kCloserBase - depth);
            } else {
                const Node* body = js::function_body(n);
                uint32_t open = after_directives(body->kids, n->body_interior_start);
                edits.insert(open, "__lacuna__.enter(\"" + id + "\");try{", depth);
                edits.insert(n->body_interior_end, "}finally{__lacuna__.exit();}",
                             kCloserBase - depth);
            }
        }
    }
    for (const Node* k : n->kids) probe_functions(k, src, inv, edits, depth);
}

std::string inline_copy_path(const SourceFile& src) {
    return "_lacuna_inline/" + fsutil::encode_component(src.app_path) + ".js";
}

}  // namespace

std::string instrument_source(const SourceFile& src, const AppInventory& inv) {
    if (!src.program) return src.text;
    if (src.text.find(kMarker) != std::string::npos) return src.text;
    EditList edits;
    edits.insert(after_directives(src.program->kids, 0), kPrelude, -1);
    probe_functions(src.program, src, inv, edits, 0);
    return edits.apply(src.text);
}

void write_instrumented_app(const AppInventory& inv, const std::filesystem::path& out_root) {
    SourceRewrites rewrites;
    for (size_t i = 0; i < inv.sources.size(); ++i)
        rewrites[i] = instrument_source(inv.sources[i], inv);
    write_app_copy(inv, out_root, rewrites, true);

    // Inline scripts double as standalone files so the trace runner can load
    // them without parsing HTML.
    for (size_t i = 0; i < inv.sources.size(); ++i)
        if (inv.sources[i].inline_html)
            fsutil::write_file(out_root / inline_copy_path(inv.sources[i]), rewrites[i]);

    // Run manifest: one group per HTML document (scripts in document order),
    // plus one group for scripts no tag references. Groups execute in
    // isolated globals; scripts within a group share one.
    nlohmann::json groups = nlohmann::json::array();
    std::vector<bool> referenced(inv.sources.size(), false);
    for (const HtmlDoc& doc : inv.html) {
        nlohmann::json scripts = nlohmann::json::array();
        for (size_t t = 0; t < doc.tags.size(); ++t) {
            size_t si = doc.tag_source[t];
            if (si == kNoIndex) continue;
            referenced[si] = true;
            const SourceFile& src = inv.sources[si];
            scripts.push_back(src.inline_html ? inline_copy_path(src) : src.app_path);
        }
        groups.push_back({{"name", doc.app_path}, {"scripts", scripts}});
    }
    nlohmann::json orphans = nlohmann::json::array();
    for (size_t i = 0; i < inv.sources.size(); ++i)
        if (!referenced[i] && !inv.sources[i].inline_html) orphans.push_back(inv.sources[i].app_path);
    if (!orphans.empty()) groups.push_back({{"name", "<orphans>"}, {"scripts", orphans}});

    nlohmann::json manifest = {{"groups", groups}};
    fsutil::write_file(out_root / "_lacuna_manifest.json", manifest.dump(2) + "\n");
}

}  // namespace lacuna
