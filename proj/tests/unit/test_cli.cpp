#include <doctest.h>

#ifndef LACUNA_TOOL
#error "LACUNA_TOOL must point at the lacuna binary"
#endif

#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <string>

#include "test_util.hpp"

using testutil::TempDir;

namespace {

struct CliResult {
    int code = -1;
    std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
    CliResult r;
    std::string cmd = std::string(LACUNA_TOOL) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void write_demo_app(const std::filesystem::path& dir) {
    testutil::write(dir / "main.js",
                    "function used() {}\nfunction unused() { return 9; }\nused();\n");
}

}  // namespace

TEST_CASE("a missing subcommand is a usage error") {
    CliResult r = run_cli("");
    CHECK(r.code != 0);
}

TEST_CASE("config mistakes exit with code 1") {
    TempDir t;
    write_demo_app(t.path() / "app");
    std::string app = (t.path() / "app").string();
    std::string out = (t.path() / "out").string();

    CliResult bad_level =
        run_cli("optimize --app " + app + " --out " + out + " --olevel 7 --analyzer static");
    CHECK(bad_level.code == 1);
    CHECK(bad_level.output.find("error:") != std::string::npos);

    CliResult bad_analyzer = run_cli("analyze --app " + app + " --analyzer bogus");
    CHECK(bad_analyzer.code == 1);

    CliResult bad_external =
        run_cli("analyze --app " + app + " --external no-colon-here");
    CHECK(bad_external.code == 1);

    CliResult no_analyzers = run_cli("analyze --app " + app);
    CHECK(no_analyzers.code == 1);
}

TEST_CASE("a run-time failure exits with code 2") {
    TempDir t;
    write_demo_app(t.path() / "app");
    CliResult r = run_cli("analyze --app " + (t.path() / "app").string() +
                          " --external broken:/nonexistent/never-runs");
    CHECK(r.code == 2);
    CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("analyze prints the run summary and the report") {
    TempDir t;
    write_demo_app(t.path() / "app");
    CliResult r =
        run_cli("analyze --app " + (t.path() / "app").string() + " --analyzer static,acg");
    CHECK(r.code == 0);
    CHECK(r.output.find("analyzers: static ok") != std::string::npos);
    CHECK(r.output.find("acg ok") != std::string::npos);
    CHECK(r.output.find("\"status\": \"dead\"") != std::string::npos);
    CHECK(r.output.find("\"unused\"") != std::string::npos);
}

TEST_CASE("optimize writes the copy and the report file") {
    TempDir t;
    write_demo_app(t.path() / "app");
    std::string out = (t.path() / "out").string();
    CliResult r = run_cli("optimize --app " + (t.path() / "app").string() + " --out " + out +
                          " --olevel 2 --analyzer static");
    CHECK(r.code == 0);
    CHECK(r.output.find("dead: 1") != std::string::npos);
    CHECK(testutil::slurp(t.path() / "out" / "main.js").find("function unused() {}") !=
          std::string::npos);
    CHECK(std::filesystem::is_regular_file(t.path() / "out" / "_lacuna_report.json"));
}

TEST_CASE("lacuna.toml fills in flags the command line omits") {
    TempDir t;
    write_demo_app(t.path() / "app");
    testutil::write(t.path() / "app" / "lacuna.toml",
                    "# defaults for this app\nolevel = 2\nanalyzer = static\n");
    std::string app = (t.path() / "app").string();

    CliResult from_config =
        run_cli("optimize --app " + app + " --out " + (t.path() / "o1").string());
    CHECK(from_config.code == 0);
    CHECK(testutil::slurp(t.path() / "o1" / "main.js").find("function unused() {}") !=
          std::string::npos);

    // explicit flags still win over the file
    CliResult from_flag = run_cli("optimize --app " + app + " --out " +
                                  (t.path() / "o2").string() + " --olevel 0");
    CHECK(from_flag.code == 0);
    CHECK(testutil::slurp(t.path() / "o2" / "main.js") ==
          testutil::slurp(t.path() / "app" / "main.js"));

    testutil::write(t.path() / "app" / "lacuna.toml", "mystery = 1\n");
    CliResult unknown_key =
        run_cli("analyze --app " + app + " --analyzer static");
    CHECK(unknown_key.code == 1);
    CHECK(unknown_key.output.find("mystery") != std::string::npos);
}

TEST_CASE("eval renders per-app and aggregate tables") {
    TempDir t;
    testutil::write(t.path() / "corpus" / "one" / "app" / "a.js",
                    "function used() {}\nfunction unused() {}\nused();\n");
    testutil::write(t.path() / "corpus" / "one" / "truth.json",
                    "{\"functions\":[{\"id\":\"a.js[0:18]\",\"status\":\"alive\"},"
                    "{\"id\":\"a.js[19:39]\",\"status\":\"dead\"}]}");
    testutil::write(t.path() / "corpus" / "two" / "app" / "b.js", "function f() {}\nf();\n");
    testutil::write(t.path() / "corpus" / "two" / "truth.json",
                    "{\"functions\":[{\"id\":\"b.js[0:15]\",\"status\":\"alive\"}]}");
    std::string corpus = (t.path() / "corpus").string();

    CliResult r = run_cli("eval --app " + corpus + " --analyzer static,acg");
    CHECK(r.code == 0);
    CHECK(r.output.find("precision") != std::string::npos);
    CHECK(r.output.find("acg+static") != std::string::npos);
    CHECK(r.output.find("aggregate (mean over apps)") != std::string::npos);
    CHECK(r.output.find("<aggregate>") != std::string::npos);

    std::string report = (t.path() / "rows.json").string();
    CliResult swept =
        run_cli("eval --app " + corpus + " --analyzer static,acg --sweep --report " + report);
    CHECK(swept.code == 0);
    size_t one_rows = 0;
    size_t pos = 0;
    while ((pos = swept.output.find("\none ", pos)) != std::string::npos) {
        ++one_rows;
        pos += 4;
    }
    CHECK(one_rows == 3);  // 2^2 - 1 combinations
    CHECK(testutil::slurp(report).find("\"app\"") != std::string::npos);
}

TEST_CASE("serve refuses an occupied port") {
    TempDir t;
    testutil::write(t.path() / "opt" / "_lacuna_bodies" / "plain.js", "1;\n");

    int blocker = socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(blocker >= 0);
    int one = 1;
    setsockopt(blocker, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = INADDR_ANY;
    addr.sin_port = htons(18212);
    REQUIRE(bind(blocker, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    REQUIRE(listen(blocker, 1) == 0);

    CliResult r = run_cli("serve --app " + (t.path() / "opt").string() + " --lazy-port 18212");
    close(blocker);
    CHECK(r.code == 2);
    CHECK(r.output.find("error:") != std::string::npos);
}
