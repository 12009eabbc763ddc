#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "lacuna/sources.hpp"

namespace lacuna {

// New text for a subset of sources, keyed by index into inventory.sources.
using SourceRewrites = std::map<size_t, std::string>;

// Copies the app tree to `out` and applies source rewrites: plain files are
// overwritten, inline scripts are spliced into their HTML document. With
// materialize_remote, fetched scripts are written under _external/ and their
// script tags repointed so the copy runs without the network.
void write_app_copy(const AppInventory& inv, const std::filesystem::path& out,
                    const SourceRewrites& rewrites, bool materialize_remote);

}  // namespace lacuna
