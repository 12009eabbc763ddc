#pragma once

#include <string>

namespace lacuna {

struct UrlParts {
    bool valid = false;
    std::string scheme;      // "http" or "https"
    std::string host;
    int port = 0;            // 0 = scheme default
    std::string path_query;  // begins with '/'
};

UrlParts parse_url(const std::string& url);

// True for http://, https://, and protocol-relative // references.
bool is_remote_url(const std::string& ref);

// App-relative storage path for a fetched script: _external/<host>/<path>.
// The port is deliberately left out so ids stay stable across test servers.
std::string remote_app_path(const std::string& url);

// Blocking GET; throws Error("fetch", ...) on failure or non-2xx status.
std::string http_get(const std::string& url, int timeout_seconds);

}  // namespace lacuna
