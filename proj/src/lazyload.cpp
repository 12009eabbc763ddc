#include "lacuna/lazyload.hpp"

#include <httplib.h>

#include <atomic>

#include "lacuna/errors.hpp"
#include "lacuna/fsutil.hpp"

namespace lacuna {

const std::string* BodyStore::find(const std::string& id) const {
    auto it = bodies_.find(id);
    return it == bodies_.end() ? nullptr : &it->second;
}

BodyStore load_store(const std::filesystem::path& dir) {
    BodyStore store;
    if (!std::filesystem::is_directory(dir)) return store;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::filesystem::path p = entry.path();
        if (p.extension() != ".js") continue;
        store.put(fsutil::decode_component(p.stem().string()), fsutil::read_file(p));
    }
    return store;
}

void serve_bodies(const BodyStore& store, int port, size_t stop_after_requests) {
    httplib::Server server;
    std::atomic<size_t> served{0};

    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    server.Post(R"(.*)", [&store](const httplib::Request& req, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        if (const std::string* body = store.find(req.body)) {
            res.status = 200;
            res.set_content(*body, "application/javascript");
        } else {
            res.status = 404;
            res.set_content("unknown function id\n", "text/plain");
        }
    });
    if (stop_after_requests > 0) {
        server.set_post_routing_handler(
            [&](const httplib::Request& req, httplib::Response&) {
                if (req.method == "POST" && ++served >= stop_after_requests) server.stop();
            });
    }

    if (!server.bind_to_port("0.0.0.0", port))
        throw Error("serve", "cannot bind port " + std::to_string(port));
    server.listen_after_bind();
}

}  // namespace lacuna
