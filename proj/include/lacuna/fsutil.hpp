#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lacuna::fsutil {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

// Relative path with '/' separators, as used in canonical function ids.
std::string app_relative(const std::filesystem::path& root, const std::filesystem::path& file);

// All regular files under root whose extension (lowercased) is in `exts`,
// sorted by app-relative path. Pass an empty list for every file.
std::vector<std::string> list_files(const std::filesystem::path& root,
                                    const std::vector<std::string>& exts);

// Copies every regular file under src into dst, preserving relative paths.
void copy_tree(const std::filesystem::path& src, const std::filesystem::path& dst);

// Order-independent content hash of a directory tree (paths + bytes).
// Used by the input-immutability checks.
uint64_t hash_tree(const std::filesystem::path& root);

bool is_within(const std::filesystem::path& outer, const std::filesystem::path& inner);

// Percent-encodes bytes outside [A-Za-z0-9._-]; inverse of decode_component.
std::string encode_component(const std::string& text);
std::string decode_component(const std::string& text);

}  // namespace lacuna::fsutil
