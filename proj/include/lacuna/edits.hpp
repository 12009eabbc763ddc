#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lacuna {

// One span edit against an immutable source buffer. Pure insertions have
// length zero. Replacements must never overlap each other; an insertion may
// sit inside or at the edge of a replacement only if it is subsumed by it
// (the replacement wins and the insertion is dropped by the caller, not
// here), so overlap is always reported as a conflict.
struct Edit {
    uint32_t pos = 0;
    uint32_t length = 0;
    std::string text;
    int order = 0;  // tie-break for same-position insertions: lower first
};

class EditList {
public:
    void insert(uint32_t pos, std::string text, int order = 0);
    void replace(uint32_t pos, uint32_t length, std::string text);

    bool empty() const { return edits_.empty(); }
    size_t size() const { return edits_.size(); }

    // Applies all edits to the buffer. Throws Error("rewrite", ...) when two
    // non-insertion edits overlap.
    std::string apply(const std::string& source) const;

private:
    std::vector<Edit> edits_;
};

}  // namespace lacuna
