#include "lacuna/edits.hpp"

#include <algorithm>

#include "lacuna/errors.hpp"

namespace lacuna {

void EditList::insert(uint32_t pos, std::string text, int order) {
    edits_.push_back({pos, 0, std::move(text), order});
}

void EditList::replace(uint32_t pos, uint32_t length, std::string text) {
    edits_.push_back({pos, length, std::move(text), 0});
}

std::string EditList::apply(const std::string& source) const {
    std::vector<Edit> sorted = edits_;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Edit& a, const Edit& b) {
        if (a.pos != b.pos) return a.pos < b.pos;
        // Insertions at a replacement's start position land before it.
        if ((a.length == 0) != (b.length == 0)) return a.length == 0;
        return a.order < b.order;
    });

    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        const Edit& a = sorted[i];
        const Edit& b = sorted[i + 1];
        if (a.length == 0) continue;
        uint32_t a_end = a.pos + a.length;
        bool overlaps = b.length == 0 ? (b.pos > a.pos && b.pos < a_end) : (b.pos < a_end);
        if (overlaps)
            throw Error("rewrite", "conflicting edits at byte " + std::to_string(b.pos));
    }

    std::string out;
    out.reserve(source.size());
    size_t cursor = 0;
    for (const Edit& e : sorted) {
        if (e.pos > source.size() || e.pos + e.length > source.size())
            throw Error("rewrite", "edit outside source bounds at byte " + std::to_string(e.pos));
        out.append(source, cursor, e.pos - cursor);
        out.append(e.text);
        cursor = e.pos + e.length;
    }
    out.append(source, cursor, source.size() - cursor);
    return out;
}

}  // namespace lacuna
