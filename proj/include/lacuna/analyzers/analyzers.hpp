#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "lacuna/cg.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/sources.hpp"

namespace lacuna {

// One node per indexed function plus the global root; no edges.
CallGraph initial_graph(const AppInventory& inv);

// Lexical name resolution: identifier callees, direct function-literal
// callees, `new`, and tagged templates. Member access and receiver binding
// contribute nothing. Edges labeled "static".
CallGraph analyze_static(const AppInventory& inv, const CallGraph& g0);

// Field-based approximation: one abstract field per property name across the
// whole app, plus intraprocedural copies through variables. Edges labeled
// "acg".
CallGraph analyze_acg(const AppInventory& inv, const CallGraph& g0);

// Higher-order natives recognized by the native-calls analyzer. Entries are
// dotted paths ("Array.prototype.map", "setTimeout"); call sites match on the
// final path component.
using NativeTable = std::set<std::string>;

NativeTable default_native_table();

// Parses a JSON array of strings. Throws Error("analyzer", ...) on malformed
// input.
NativeTable parse_native_table(const std::string& json_text);

// The acg analysis plus edges through known natives: function-valued
// arguments to a native call become callees, and call/apply/bind resolve to
// their receiver. Edges labeled "native-calls".
CallGraph analyze_native_calls(const AppInventory& inv, const CallGraph& g0,
                               const NativeTable& natives);

// Trace-driven graph: one edge per distinct `CALL <caller> <callee>` line.
// Malformed lines and ids that do not resolve against the inventory become
// diagnostics and are skipped. Edges labeled `label` ("dynamic" by default).
CallGraph analyze_dynamic(const AppInventory& inv, const CallGraph& g0,
                          const std::string& trace_text, DiagnosticList& diags,
                          const std::string& label = "dynamic");

// Instrumented copy of one source: a bookkeeping prelude plus enter/exit
// probes around every function body. Already-instrumented text is returned
// unchanged.
std::string instrument_source(const SourceFile& src, const AppInventory& inv);

// Writes the instrumented app copy under out_root. Remote scripts are
// materialized and their tags repointed so the copy runs standalone.
void write_instrumented_app(const AppInventory& inv, const std::filesystem::path& out_root);

// Runs an external analyzer: `<cmd> <app-root> <g0-path>`, expecting an
// exchange-format graph on stdout and exit 0. Every id is validated against
// g0's node set; edges are relabeled to `name`. Throws Error("analyzer", ...)
// on nonzero exit, malformed output, or unknown ids.
CallGraph analyze_external(const AppInventory& inv, const CallGraph& g0,
                           const std::string& name, const std::string& command,
                           int timeout_seconds);

namespace detail {

// Shared engine behind acg and native-calls. A null table disables all
// native-specific rules.
CallGraph run_field_based(const AppInventory& inv, const CallGraph& g0,
                          const std::string& label, const NativeTable* natives);

}  // namespace detail

}  // namespace lacuna
