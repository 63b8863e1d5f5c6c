#include "psl/pipeline.hpp"

#include "psl/image_io.hpp"
#include "psl/imaging.hpp"

namespace psl {

FeatureVector lesion_features(const RasterImage& raw, const BinaryMask& standard_mask) {
    const Preprocessed pre = preprocess(resize_standard(raw));
    return extract_feature_vector(pre.colour, standard_mask);
}

FeatureTable extract_manifest_features(const DatasetManifest& manifest,
                                       const std::function<void(std::size_t, std::size_t)>& progress) {
    FeatureTable table;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const DatasetEntry& e = manifest.entries[i];
        if (progress) progress(i, manifest.entries.size());
        if (!e.has_mask()) {
            table.failures.push_back({i, e.id(), "no ground-truth mask"});
            continue;
        }
        try {
            table.features.push_back(lesion_features(read_image(e.image), load_standard_mask(e.mask)));
            table.entry_index.push_back(i);
        } catch (const std::exception& err) {
            table.failures.push_back({i, e.id(), err.what()});
        }
    }
    return table;
}

SampleSet build_sample_set(const DatasetManifest& manifest, const FeatureTable& table, bool use_context) {
    if (manifest.classes.size() < 2) throw DatasetError("training needs a manifest with at least two classes");
    const std::size_t ctx = use_context ? manifest.context_schema.fields.size() : 0;
    SampleSet set(kFeatureCount + ctx, manifest.classes);
    for (std::size_t r = 0; r < table.features.size(); ++r) {
        const std::size_t i = table.entry_index[r];
        const DatasetEntry& e = manifest.entries[i];
        if (!e.label) throw DatasetError("entry " + std::to_string(i) + " (" + e.id() + "): no label");
        if (use_context && !e.has_context())
            throw DatasetError("entry " + std::to_string(i) + " (" + e.id() + "): no context for the " +
                               manifest.context_schema.name + " schema");
        const std::vector<double> row =
            fuse_context(table.features[r], use_context ? std::span<const double>(e.encoded_context) : std::span<const double>());
        set.add(row, *e.label);
    }
    return set;
}

}  // namespace psl
