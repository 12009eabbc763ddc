#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lacuna {

// Hard failure carrying the module that raised it. Soft per-item failures
// (parse errors, fetch errors, analyzer failures) travel in Diagnostic lists
// instead so a run can continue past them.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const { return module_; }

private:
    std::string module_;
};

struct Diagnostic {
    std::string subject;  // app path, URL, analyzer name, trace line, ...
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

using DiagnosticList = std::vector<Diagnostic>;

}  // namespace lacuna
