#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wordmap/phoneme.hpp"
#include "wordmap/representation.hpp"

namespace wordmap {

// A dataset directory holds descriptors.txt (required), an optional
// lexicon.tsv merged over the builtin lexicon, and optional designs/*.design
// overrides.
struct Dataset {
    PronouncingLexicon lexicon;
    std::vector<ObjectDescriptors> objects;
    std::filesystem::path root;

    static Dataset open(const std::filesystem::path& dir);
    static Dataset from_objects(std::vector<ObjectDescriptors> objects,
                                PronouncingLexicon lexicon = PronouncingLexicon::builtin());

    const PhonemeTable& table() const { return PhonemeTable::builtin(); }
    bool has_object(std::string_view name) const;
    const ObjectDescriptors& object(std::string_view name) const;

private:
    void index();
    std::map<std::string, std::size_t, std::less<>> object_index_;
};

}  // namespace wordmap
