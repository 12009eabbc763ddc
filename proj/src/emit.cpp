#include "lacuna/emit.hpp"

#include "lacuna/edits.hpp"
#include "lacuna/fsutil.hpp"

namespace lacuna {

void write_app_copy(const AppInventory& inv, const std::filesystem::path& out,
                    const SourceRewrites& rewrites, bool materialize_remote) {
    fsutil::copy_tree(inv.root, out);

    for (size_t i = 0; i < inv.sources.size(); ++i) {
        const SourceFile& src = inv.sources[i];
        if (src.inline_html) continue;
        auto it = rewrites.find(i);
        if (src.remote) {
            if (materialize_remote)
                fsutil::write_file(out / src.app_path,
                                   it != rewrites.end() ? it->second : src.text);
            continue;
        }
        if (it != rewrites.end()) fsutil::write_file(out / src.app_path, it->second);
    }

    for (const HtmlDoc& doc : inv.html) {
        EditList edits;
        for (size_t t = 0; t < doc.tags.size(); ++t) {
            const ScriptTag& tag = doc.tags[t];
            size_t si = doc.tag_source[t];
            if (tag.inline_script && si != kNoIndex) {
                auto it = rewrites.find(si);
                if (it != rewrites.end())
                    edits.replace(tag.content_start, tag.content_end - tag.content_start,
                                  it->second);
            }
            if (materialize_remote && !doc.tag_new_src[t].empty())
                edits.replace(tag.src_value_start, tag.src_value_end - tag.src_value_start,
                              doc.tag_new_src[t]);
        }
        if (!edits.empty()) fsutil::write_file(out / doc.app_path, edits.apply(doc.text));
    }
}

}  // namespace lacuna
