#pragma once

#include <functional>
#include <string>
#include <vector>

#include "psl/classifier.hpp"
#include "psl/dataset.hpp"
#include "psl/features.hpp"
#include "psl/preprocessing.hpp"

namespace psl {

/// Feature vector of a lesion: the raw image is standardized and colour
/// normalised, the mask must already be on the 300x225 grid.
FeatureVector lesion_features(const RasterImage& raw, const BinaryMask& standard_mask);

struct EntryFailure {
    std::size_t index = 0;
    std::string id;
    std::string message;
};

struct FeatureTable {
    std::vector<std::size_t> entry_index;  // manifest entry of each row
    std::vector<FeatureVector> features;
    std::vector<EntryFailure> failures;
};

/// Features of every manifest entry with a ground-truth mask. Entries that
/// fail are recorded and skipped.
FeatureTable extract_manifest_features(const DatasetManifest& manifest,
                                       const std::function<void(std::size_t, std::size_t)>& progress = {});

/// Labelled rows (features, optionally fused with context) for training.
/// Throws if an entry lacks a label, or lacks context while use_context is set.
SampleSet build_sample_set(const DatasetManifest& manifest, const FeatureTable& table, bool use_context);

}  // namespace psl
