#include <json.hpp>

#include "lacuna/analyzers/analyzers.hpp"
#include "lacuna/errors.hpp"

namespace lacuna {

NativeTable default_native_table() {
    return {
        "setTimeout",
        "setInterval",
        "requestAnimationFrame",
        "queueMicrotask",
        "addEventListener",
        "Promise",
        "Array.prototype.map",
        "Array.prototype.filter",
        "Array.prototype.forEach",
        "Array.prototype.reduce",
        "Array.prototype.reduceRight",
        "Array.prototype.some",
        "Array.prototype.every",
        "Array.prototype.find",
        "Array.prototype.findIndex",
        "Array.prototype.flatMap",
        "Array.prototype.sort",
        "Function.prototype.call",
        "Function.prototype.apply",
        "Function.prototype.bind",
        "Promise.prototype.then",
        "Promise.prototype.catch",
        "Promise.prototype.finally",
    };
}

NativeTable parse_native_table(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw Error("analyzer", "native table must be a JSON array of strings");
    NativeTable table;
    for (const auto& entry : doc) {
        if (!entry.is_string())
            throw Error("analyzer", "native table entries must be strings");
        table.insert(entry.get<std::string>());
    }
    return table;
}

CallGraph analyze_native_calls(const AppInventory& inv, const CallGraph& g0,
                               const NativeTable& natives) {
    return detail::run_field_based(inv, g0, "native-calls", &natives);
}

}  // namespace lacuna
