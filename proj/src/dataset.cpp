#include "wordmap/dataset.hpp"

#include "wordmap/errors.hpp"

namespace wordmap {

void Dataset::index() {
    object_index_.clear();
    for (std::size_t i = 0; i < objects.size(); ++i)
        object_index_.emplace(objects[i].name, i);
}

Dataset Dataset::open(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw_data("dataset directory '" + dir.string() + "' does not exist");
    Dataset ds;
    ds.root = dir;
    ds.lexicon = PronouncingLexicon::builtin();
    const auto lexicon_path = dir / "lexicon.tsv";
    if (std::filesystem::exists(lexicon_path)) ds.lexicon.merge_file(lexicon_path);
    const auto descriptors_path = dir / "descriptors.txt";
    if (!std::filesystem::exists(descriptors_path))
        throw_data("dataset is missing '" + descriptors_path.string() +
                   "' (generate one with: wordmap gen-descriptors)");
    ds.objects = load_descriptors(descriptors_path);
    ds.index();
    return ds;
}

Dataset Dataset::from_objects(std::vector<ObjectDescriptors> objects,
                              PronouncingLexicon lexicon) {
    Dataset ds;
    ds.lexicon = std::move(lexicon);
    ds.objects = std::move(objects);
    ds.index();
    return ds;
}

bool Dataset::has_object(std::string_view name) const {
    return object_index_.find(name) != object_index_.end();
}

const ObjectDescriptors& Dataset::object(std::string_view name) const {
    auto it = object_index_.find(name);
    if (it == object_index_.end())
        throw_data("object '" + std::string(name) + "' not present in dataset");
    return objects[it->second];
}

}  // namespace wordmap
