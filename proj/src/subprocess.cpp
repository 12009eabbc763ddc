#include "lacuna/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

#include "lacuna/errors.hpp"

namespace lacuna {

namespace {

void drain(int fd, std::string& sink) {
    char buf[4096];
    for (;;) {
        ssize_t n = read(fd, buf, sizeof buf);
        if (n > 0) {
            sink.append(buf, static_cast<size_t>(n));
            continue;
        }
        return;
    }
}

}  // namespace

ProcessResult run_command(const std::string& command, const std::vector<std::string>& args,
                          int timeout_seconds,
                          const std::map<std::string, std::string>& env) {
    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
        throw Error("subprocess", std::string("pipe: ") + std::strerror(errno));

    pid_t pid = fork();
    if (pid < 0) throw Error("subprocess", std::string("fork: ") + std::strerror(errno));

    if (pid == 0) {
        setpgid(0, 0);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        for (const auto& [k, v] : env) setenv(k.c_str(), v.c_str(), 1);

        // sh -c '<command> "$@"' sh <args...> keeps the user's own quoting
        // intact while appending ours safely.
        std::string script = command + " \"$@\"";
        std::vector<char*> argv;
        argv.push_back(const_cast<char*>("sh"));
        argv.push_back(const_cast<char*>("-c"));
        argv.push_back(const_cast<char*>(script.c_str()));
        argv.push_back(const_cast<char*>("sh"));
        for (const std::string& a : args) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        execv("/bin/sh", argv.data());
        _exit(127);
    }

    setpgid(pid, pid);  // mirror the child's call; loser of the race is a no-op
    close(out_pipe[1]);
    close(err_pipe[1]);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    ProcessResult result;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_seconds);
    bool out_open = true, err_open = true;

    while (out_open || err_open) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - std::chrono::steady_clock::now())
                        .count();
        if (left <= 0) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            break;
        }
        struct pollfd fds[2];
        nfds_t n = 0;
        if (out_open) fds[n++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[n++] = {err_pipe[0], POLLIN, 0};
        int rc = poll(fds, n, static_cast<int>(left > 1000 ? 1000 : left));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (nfds_t i = 0; i < n; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            char buf[4096];
            ssize_t got;
            while ((got = read(fds[i].fd, buf, sizeof buf)) > 0)
                (fds[i].fd == out_pipe[0] ? result.out : result.err)
                    .append(buf, static_cast<size_t>(got));
            if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR)) {
                if (fds[i].fd == out_pipe[0])
                    out_open = false;
                else
                    err_open = false;
            }
        }
    }

    // Pipes may close while grandchildren still run; what matters is the
    // direct child's status.
    drain(out_pipe[0], result.out);
    drain(err_pipe[0], result.err);
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    if (result.timed_out) {
        waitpid(pid, &status, 0);
        result.exit_code = 128 + SIGKILL;
    } else {
        waitpid(pid, &status, 0);
        if (WIFEXITED(status))
            result.exit_code = WEXITSTATUS(status);
        else if (WIFSIGNALED(status))
            result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

}  // namespace lacuna
