#include "lacuna/fsutil.hpp"

#include <algorithm>
#include <fstream>

#include "lacuna/errors.hpp"

namespace fs = std::filesystem;

namespace lacuna::fsutil {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("io", "read failure on " + path.string());
    return bytes;
}

void write_file(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("io", "write failure on " + path.string());
}

std::string app_relative(const fs::path& root, const fs::path& file) {
    std::error_code ec;
    fs::path rel = fs::relative(file, root, ec);
    if (ec || rel.empty()) return file.generic_string();
    return rel.generic_string();
}

static std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> list_files(const fs::path& root, const std::vector<std::string>& exts) {
    std::vector<std::string> out;
    if (!fs::exists(root)) throw Error("io", "no such directory: " + root.string());
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (!exts.empty()) {
            std::string ext = lower(entry.path().extension().string());
            if (std::find(exts.begin(), exts.end(), ext) == exts.end()) continue;
        }
        out.push_back(app_relative(root, entry.path()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void copy_tree(const fs::path& src, const fs::path& dst) {
    for (const std::string& rel : list_files(src, {})) {
        fs::path target = dst / fs::path(rel);
        if (target.has_parent_path()) fs::create_directories(target.parent_path());
        fs::copy_file(src / fs::path(rel), target, fs::copy_options::overwrite_existing);
    }
    fs::create_directories(dst);
}

static uint64_t fnv1a(const std::string& bytes, uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t hash_tree(const fs::path& root) {
    uint64_t h = 1469598103934665603ULL;
    for (const std::string& rel : list_files(root, {})) {
        h = fnv1a(rel, h);
        h = fnv1a(read_file(root / fs::path(rel)), h);
    }
    return h;
}

bool is_within(const fs::path& outer, const fs::path& inner) {
    std::error_code ec;
    fs::path o = fs::weakly_canonical(outer, ec);
    fs::path i = fs::weakly_canonical(inner, ec);
    auto oit = o.begin();
    auto iit = i.begin();
    for (; oit != o.end(); ++oit, ++iit) {
        if (iit == i.end() || *oit != *iit) return false;
    }
    return true;
}

std::string encode_component(const std::string& text) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        bool safe = std::isalnum(c) || c == '.' || c == '_' || c == '-';
        if (safe) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string decode_component(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size()) {
            int hi = hex_value(text[i + 1]);
            int lo = hex_value(text[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(text[i]);
    }
    return out;
}

}  // namespace lacuna::fsutil
