// External-analyzer stand-in used by the adapter tests. Invoked the way the
// toolchain invokes any external analyzer:
//
//   cg_stub <mode> <app-root> <g0-path>
//
// Modes:
//   echo        print g0 unchanged (a well-behaved analyzer that found nothing)
//   figure2     emit the running example's three call edges, located by name
//   unknown-id  emit an edge to a node that does not exist in g0
//   bad-json    print something that is not JSON
//   fail        exit 3 with a message on stderr
//   slow        sleep five seconds, then echo

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cg_stub: cannot read " << path << "\n";
        std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string find_id(const json& g0, const std::string& name, const std::string& kind) {
    for (const auto& n : g0.at("nodes")) {
        bool name_ok = name.empty() || (n.contains("name") && n["name"].is_string() &&
                                        n["name"].get<std::string>() == name);
        bool kind_ok = kind.empty() || n.at("kind").get<std::string>() == kind;
        if (name_ok && kind_ok) return n.at("id").get<std::string>();
    }
    std::cerr << "cg_stub: no node with name '" << name << "' kind '" << kind << "'\n";
    std::exit(2);
}

json edge(const std::string& caller, const std::string& callee) {
    return {{"caller", caller}, {"callee", callee}, {"labels", {"stub"}}};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: cg_stub <mode> <app-root> <g0-path>\n";
        return 2;
    }
    std::string mode = argv[1];
    std::string g0_text = read_file(argv[3]);

    if (mode == "fail") {
        std::cerr << "cg_stub: deliberate failure\n";
        return 3;
    }
    if (mode == "bad-json") {
        std::cout << "{this is not json\n";
        return 0;
    }
    if (mode == "slow") {
        std::this_thread::sleep_for(std::chrono::seconds(5));
        std::cout << g0_text;
        return 0;
    }
    if (mode == "echo") {
        std::cout << g0_text;
        return 0;
    }

    json g0 = json::parse(g0_text);
    if (mode == "figure2") {
        std::string root = find_id(g0, "", "global");
        std::string a = find_id(g0, "a", "");
        std::string b = find_id(g0, "b", "");
        std::string inl = find_id(g0, "", "expression");
        json out = {{"nodes", g0.at("nodes")},
                    {"edges", {edge(root, a), edge(a, inl), edge(inl, b)}}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (mode == "unknown-id") {
        std::string root = find_id(g0, "", "global");
        json out = {{"nodes", g0.at("nodes")},
                    {"edges", {edge(root, "ghost.js[1:2]")}}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::cerr << "cg_stub: unknown mode " << mode << "\n";
    return 2;
}
