#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace lacuna {

// Function bodies exported at OL1, keyed by canonical function id.
class BodyStore {
public:
    void put(const std::string& id, std::string body) { bodies_[id] = std::move(body); }
    const std::string* find(const std::string& id) const;
    size_t size() const { return bodies_.size(); }

private:
    std::map<std::string, std::string> bodies_;
};

// Reads every *.js file under a _lacuna_bodies directory, reversing the
// filename encoding back into function ids.
BodyStore load_store(const std::filesystem::path& dir);

// Serves bodies over HTTP: POST with the id as the raw request body returns
// the stored text, unknown ids return 404. Blocks until the process dies or
// stop_after_requests is reached (0 = run forever). Throws Error("serve")
// when the port cannot be bound.
void serve_bodies(const BodyStore& store, int port, size_t stop_after_requests = 0);

inline constexpr int kDefaultLazyPort = 8125;

}  // namespace lacuna
