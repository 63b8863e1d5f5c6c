#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "psl/image.hpp"

namespace psl {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ContextKind { Age, Sex, YesNo };

struct ContextField {
    std::string name;
    ContextKind kind = ContextKind::YesNo;

    friend bool operator==(const ContextField&, const ContextField&) = default;
};

/// Ordered context fields. "age" is numeric, "sex" is male/female, every
/// other field is a yes/no answer.
struct ContextSchema {
    std::string name;  // "pad", "isbi", "none" or "custom"
    std::vector<ContextField> fields;

    bool empty() const { return fields.empty(); }
    std::vector<std::string> field_names() const;

    friend bool operator==(const ContextSchema&, const ContextSchema&) = default;
};

ContextSchema pad_schema();
ContextSchema isbi_schema();

/// "pad", "isbi", "none", or an explicit array of field names.
ContextSchema context_schema_from_json(const nlohmann::json& spec);
ContextSchema context_schema_from_fields(const std::vector<std::string>& names);
nlohmann::json context_schema_to_json(const ContextSchema& schema);

/// Yes -> 1, No -> 0, male -> 0, female -> 1, age as given. Every schema
/// field must be present; throws InvalidInput naming the offending field.
std::vector<double> encode_context(const nlohmann::json& raw, const ContextSchema& schema);

struct DatasetEntry {
    std::filesystem::path image;
    std::filesystem::path mask;  // empty when no ground truth
    std::optional<int> label;
    nlohmann::json context;      // raw answers; null when absent
    std::vector<double> encoded_context;

    bool has_mask() const { return !mask.empty(); }
    bool has_context() const { return !context.is_null(); }
    std::string id() const { return image.filename().string(); }
};

struct DatasetManifest {
    std::string name;
    std::vector<std::string> classes;
    ContextSchema context_schema;
    std::vector<DatasetEntry> entries;
    std::filesystem::path base_dir;

    std::map<std::string, std::size_t> class_histogram() const;
    bool all_labelled() const;
    bool all_masked() const;
    bool all_with_context() const;
};

/// Paths in the manifest are relative to the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);

/// CSV with a header of `image` followed by the schema fields; fills the
/// context of the manifest entries whose image file name matches.
/// Returns the number of entries updated.
std::size_t import_context_csv(DatasetManifest& manifest, const std::filesystem::path& csv_path);
std::size_t import_context_csv_text(DatasetManifest& manifest, const std::string& text);

/// Ground-truth mask, nearest-neighbour resized to the standard grid.
BinaryMask load_standard_mask(const std::filesystem::path& path);

}  // namespace psl
