#include <regex>
#include <sstream>
#include <string>

#include "lacuna/analyzers/analyzers.hpp"

namespace lacuna {

CallGraph analyze_dynamic(const AppInventory& inv, const CallGraph& g0,
                          const std::string& trace_text, DiagnosticList& diags,
                          const std::string& label) {
    CallGraph g = g0;
    static const std::regex line_re(R"(^CALL (.+\[\d+:\d+\]) (.+\[\d+:\d+\])$)");

    std::istringstream in(trace_text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re)) {
            diags.push_back({"trace:" + std::to_string(lineno), "malformed trace line, skipped"});
            continue;
        }
        auto caller = FunctionId::parse(m[1].str());
        auto callee = FunctionId::parse(m[2].str());
        if (!caller || !callee) {
            diags.push_back({"trace:" + std::to_string(lineno), "unparsable id, line skipped"});
            continue;
        }
        bool caller_known = caller->is_global() || inv.index_of(*caller) != kNoIndex;
        bool callee_known = inv.index_of(*callee) != kNoIndex;
        if (!caller_known || !callee_known) {
            diags.push_back({"trace:" + std::to_string(lineno),
                             "id does not resolve against the app: " +
                                 (caller_known ? callee->canonical() : caller->canonical())});
            continue;
        }
        g.add_edge(*caller, *callee, label);
    }
    return g;
}

}  // namespace lacuna
