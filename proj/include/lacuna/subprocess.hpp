#pragma once

#include <map>
#include <string>
#include <vector>

namespace lacuna {

struct ProcessResult {
    int exit_code = -1;  // 128+signal when killed
    bool timed_out = false;
    std::string out;
    std::string err;
};

// Runs a user-supplied shell command with extra arguments appended, capturing
// stdout and stderr. The command runs in its own process group; on timeout
// the whole group is killed. stdin reads from /dev/null. `env` entries are
// added to the child environment.
ProcessResult run_command(const std::string& command, const std::vector<std::string>& args,
                          int timeout_seconds,
                          const std::map<std::string, std::string>& env = {});

}  // namespace lacuna
