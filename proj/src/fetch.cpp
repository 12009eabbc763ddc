#include "lacuna/fetch.hpp"

#include <cstdint>
#include <cstdio>

#include "httplib.h"
#include "lacuna/errors.hpp"

namespace lacuna {

namespace {

uint32_t fnv1a(std::string_view s) {
    uint32_t h = 2166136261u;
    for (unsigned char c : s) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

std::string hash8(std::string_view s) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", fnv1a(s));
    return buf;
}

std::string sanitize_segment(std::string_view seg) {
    std::string out;
    for (char c : seg) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '.' || c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

}  // namespace

bool is_remote_url(const std::string& ref) {
    return ref.rfind("http://", 0) == 0 || ref.rfind("https://", 0) == 0 ||
           ref.rfind("//", 0) == 0;
}

UrlParts parse_url(const std::string& url) {
    UrlParts p;
    std::string rest;
    if (url.rfind("http://", 0) == 0) {
        p.scheme = "http";
        rest = url.substr(7);
    } else if (url.rfind("https://", 0) == 0) {
        p.scheme = "https";
        rest = url.substr(8);
    } else if (url.rfind("//", 0) == 0) {
        p.scheme = "http";
        rest = url.substr(2);
    } else {
        return p;
    }
    size_t slash = rest.find('/');
    std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    p.path_query = slash == std::string::npos ? "/" : rest.substr(slash);
    size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        p.host = authority.substr(0, colon);
        try {
            p.port = std::stoi(authority.substr(colon + 1));
        } catch (...) {
            return p;
        }
    } else {
        p.host = authority;
    }
    if (p.port == 0) p.port = p.scheme == "https" ? 443 : 80;
    p.valid = !p.host.empty();
    return p;
}

std::string remote_app_path(const std::string& url) {
    UrlParts p = parse_url(url);
    if (!p.valid) return "_external/invalid/" + hash8(url) + ".js";

    std::string path = p.path_query;
    std::string query;
    size_t q = path.find('?');
    if (q != std::string::npos) {
        query = path.substr(q + 1);
        path = path.substr(0, q);
    }
    size_t hash_pos = path.find('#');
    if (hash_pos != std::string::npos) path = path.substr(0, hash_pos);

    std::string out = "_external/" + sanitize_segment(p.host);
    std::string current;
    std::string clean_path;
    for (size_t i = 1; i <= path.size(); i++) {
        if (i == path.size() || path[i] == '/') {
            if (!current.empty() && current != "." && current != "..")
                clean_path += "/" + sanitize_segment(current);
            current.clear();
        } else {
            current.push_back(path[i]);
        }
    }
    if (clean_path.empty() || path.back() == '/') clean_path += "/index.js";
    if (!query.empty()) {
        size_t dot = clean_path.rfind('.');
        size_t last_slash = clean_path.rfind('/');
        std::string marker = "_q" + hash8(url);
        if (dot != std::string::npos && dot > last_slash)
            clean_path.insert(dot, marker);
        else
            clean_path += marker;
    }
    return out + clean_path;
}

std::string http_get(const std::string& url, int timeout_seconds) {
    UrlParts p = parse_url(url);
    if (!p.valid) throw Error("fetch", "malformed script URL: " + url);

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (p.scheme == "https")
        throw Error("fetch", "https unsupported in this build: " + url);
#endif

    std::string origin = p.scheme + "://" + p.host + ":" + std::to_string(p.port);
    httplib::Client cli(origin);
    cli.set_connection_timeout(timeout_seconds, 0);
    cli.set_read_timeout(timeout_seconds, 0);
    cli.set_follow_location(true);

    auto res = cli.Get(p.path_query);
    if (!res) throw Error("fetch", "request failed for " + url);
    if (res->status < 200 || res->status >= 300)
        throw Error("fetch", "HTTP " + std::to_string(res->status) + " for " + url);
    return res->body;
}

}  // namespace lacuna
