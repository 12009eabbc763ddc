#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lacuna {

struct ScriptTag {
    bool inline_script = false;
    std::string src;                // raw src attribute value (external scripts)
    std::string type;               // raw type attribute value, lowercased; "" if absent
    uint32_t tag_start = 0;         // byte offset of '<' of the opening tag
    uint32_t tag_end = 0;           // byte offset just past '>' of the closing tag (inline)
                                    // or of the opening tag (external)
    uint32_t content_start = 0;     // inline: span of the script text
    uint32_t content_end = 0;
    uint32_t src_value_start = 0;   // external: span of the src attribute value
    uint32_t src_value_end = 0;
    bool is_javascript = false;     // type absent or a recognized JS MIME / module
};

// Scans an HTML document for script tags. Comment-wrapped scripts are skipped.
// This is a tag-level scan, not a full HTML parse; it tolerates sloppy markup.
std::vector<ScriptTag> scan_html_scripts(std::string_view html);

}  // namespace lacuna
