#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "psl/classifier.hpp"
#include "psl/dataset.hpp"

namespace psl {

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to classify a new lesion: scaler, RELM weights, class
/// labels, hyperparameters, and the context schema the model was fed.
struct ModelFile {
    Classifier classifier;
    ContextSchema context_schema{"none", {}};
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t expected_input_dim() const { return kFeatureCount + context_schema.fields.size(); }
};

std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace psl
