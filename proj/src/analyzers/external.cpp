#include <chrono>
#include <filesystem>

#include <unistd.h>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/fsutil.hpp"
#include "lacuna/subprocess.hpp"

namespace fs = std::filesystem;

namespace lacuna {

namespace {

std::string trimmed(const std::string& s, size_t limit = 400) {
    std::string t = s.substr(0, limit);
    while (!t.empty() && (t.back() == '\n' || t.back() == '\r')) t.pop_back();
    return t;
}

}  // namespace

CallGraph analyze_external(const AppInventory& inv, const CallGraph& g0,
                           const std::string& name, const std::string& command,
                           int timeout_seconds) {
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    fs::path g0_path = fs::temp_directory_path() /
                       ("lacuna-g0-" + std::to_string(getpid()) + "-" + std::to_string(stamp) +
                        ".json");
    fsutil::write_file(g0_path, serialize_graph(g0));

    ProcessResult r;
    try {
        r = run_command(command, {inv.root.string(), g0_path.string()}, timeout_seconds);
    } catch (...) {
        fs::remove(g0_path);
        throw;
    }
    fs::remove(g0_path);

    if (r.timed_out)
        throw Error("analyzer", name + ": timed out after " + std::to_string(timeout_seconds) + "s");
    if (r.exit_code != 0)
        throw Error("analyzer", name + ": exit code " + std::to_string(r.exit_code) +
                                    (r.err.empty() ? "" : ", stderr: " + trimmed(r.err)));

    CallGraph parsed;
    try {
        parsed = deserialize_graph(r.out);
    } catch (const Error& e) {
        throw Error("analyzer", name + ": malformed output: " + e.what());
    }

    for (const auto& [id, node] : parsed.nodes())
        if (!g0.has_node(id))
            throw Error("analyzer", name + ": unknown node id " + id.canonical());

    // Keep g0's full node set; take the adapter's edges under our label.
    CallGraph result = g0;
    for (const auto& [key, labels] : parsed.edges()) {
        if (!g0.has_node(key.first))
            throw Error("analyzer", name + ": unknown caller id " + key.first.canonical());
        if (!g0.has_node(key.second))
            throw Error("analyzer", name + ": unknown callee id " + key.second.canonical());
        result.add_edge(key.first, key.second, name);
    }
    return result;
}

}  // namespace lacuna
