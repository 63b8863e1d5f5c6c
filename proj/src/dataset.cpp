#include "psl/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "psl/image_io.hpp"
#include "psl/imaging.hpp"

namespace psl {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

ContextKind kind_for(const std::string& name) {
    const std::string n = lower(name);
    if (n == "age") return ContextKind::Age;
    if (n == "sex") return ContextKind::Sex;
    return ContextKind::YesNo;
}

std::optional<double> parse_number(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

double encode_field(const nlohmann::json& value, const ContextField& field) {
    const std::string where = "context field '" + field.name + "'";
    switch (field.kind) {
        case ContextKind::Age: {
            std::optional<double> age;
            if (value.is_number()) age = value.get<double>();
            if (value.is_string()) age = parse_number(value.get<std::string>());
            if (!age || !std::isfinite(*age) || *age < 0.0)
                throw InvalidInput(where + ": expected a non-negative number, got " + value.dump());
            return *age;
        }
        case ContextKind::Sex: {
            if (value.is_string()) {
                const std::string s = lower(trim(value.get<std::string>()));
                if (s == "male" || s == "m") return 0.0;
                if (s == "female" || s == "f") return 1.0;
            }
            if (value.is_number_integer() && (value.get<int>() == 0 || value.get<int>() == 1)) return value.get<int>();
            throw InvalidInput(where + ": expected male or female, got " + value.dump());
        }
        case ContextKind::YesNo: {
            if (value.is_boolean()) return value.get<bool>() ? 1.0 : 0.0;
            if (value.is_string()) {
                const std::string s = lower(trim(value.get<std::string>()));
                if (s == "yes" || s == "true" || s == "1") return 1.0;
                if (s == "no" || s == "false" || s == "0") return 0.0;
            }
            if (value.is_number_integer() && (value.get<int>() == 0 || value.get<int>() == 1)) return value.get<int>();
            throw InvalidInput(where + ": expected Yes or No, got " + value.dump());
        }
    }
    throw InvalidInput(where + ": unknown field kind");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

std::vector<std::string> ContextSchema::field_names() const {
    std::vector<std::string> out;
    for (const auto& f : fields) out.push_back(f.name);
    return out;
}

ContextSchema context_schema_from_fields(const std::vector<std::string>& names) {
    ContextSchema s{"custom", {}};
    for (const auto& n : names) {
        if (n.empty()) throw InvalidInput("context field names must not be empty");
        for (const auto& existing : s.fields)
            if (existing.name == n) throw InvalidInput("duplicate context field '" + n + "'");
        s.fields.push_back({n, kind_for(n)});
    }
    return s;
}

ContextSchema pad_schema() {
    ContextSchema s = context_schema_from_fields({"age", "itch", "grow", "hurt", "change", "bleed", "raise"});
    s.name = "pad";
    return s;
}

ContextSchema isbi_schema() {
    ContextSchema s = context_schema_from_fields({"age", "sex"});
    s.name = "isbi";
    return s;
}

ContextSchema context_schema_from_json(const nlohmann::json& spec) {
    if (spec.is_null()) return {"none", {}};
    if (spec.is_string()) {
        const std::string n = lower(spec.get<std::string>());
        if (n == "pad") return pad_schema();
        if (n == "isbi") return isbi_schema();
        if (n == "none") return {"none", {}};
        throw InvalidInput("unknown context schema '" + spec.get<std::string>() + "' (expected pad, isbi or none)");
    }
    if (spec.is_array()) {
        std::vector<std::string> names;
        for (const auto& v : spec) {
            if (!v.is_string()) throw InvalidInput("context_schema array must hold field names");
            names.push_back(v.get<std::string>());
        }
        if (names == pad_schema().field_names()) return pad_schema();
        if (names == isbi_schema().field_names()) return isbi_schema();
        return context_schema_from_fields(names);
    }
    throw InvalidInput("context_schema must be a name or an array of field names");
}

nlohmann::json context_schema_to_json(const ContextSchema& schema) {
    if (schema.name == "pad" || schema.name == "isbi" || schema.name == "none") return schema.name;
    return schema.field_names();
}

std::vector<double> encode_context(const nlohmann::json& raw, const ContextSchema& schema) {
    if (!raw.is_object()) throw InvalidInput("context must be a JSON object");
    std::vector<double> out;
    out.reserve(schema.fields.size());
    for (const auto& field : schema.fields) {
        if (!raw.contains(field.name)) throw InvalidInput("context field '" + field.name + "' is missing");
        out.push_back(encode_field(raw.at(field.name), field));
    }
    for (const auto& [key, _] : raw.items()) {
        const bool known = std::any_of(schema.fields.begin(), schema.fields.end(),
                                       [&](const ContextField& f) { return f.name == key; });
        if (!known) throw InvalidInput("context field '" + key + "' is not in the " + schema.name + " schema");
    }
    return out;
}

std::map<std::string, std::size_t> DatasetManifest::class_histogram() const {
    std::map<std::string, std::size_t> hist;
    for (const auto& c : classes) hist[c] = 0;
    for (const auto& e : entries)
        if (e.label) ++hist[classes[static_cast<std::size_t>(*e.label)]];
    return hist;
}

bool DatasetManifest::all_labelled() const {
    return std::all_of(entries.begin(), entries.end(), [](const DatasetEntry& e) { return e.label.has_value(); });
}

bool DatasetManifest::all_masked() const {
    return std::all_of(entries.begin(), entries.end(), [](const DatasetEntry& e) { return e.has_mask(); });
}

bool DatasetManifest::all_with_context() const {
    return std::all_of(entries.begin(), entries.end(), [](const DatasetEntry& e) { return e.has_context(); });
}

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DatasetError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw DatasetError("manifest must be a JSON object");

    DatasetManifest m;
    m.base_dir = base_dir;
    m.name = doc.value("name", std::string("dataset"));
    if (doc.contains("classes")) {
        if (!doc["classes"].is_array()) throw DatasetError("manifest 'classes' must be an array of names");
        for (const auto& c : doc["classes"]) {
            if (!c.is_string()) throw DatasetError("manifest 'classes' must be an array of names");
            if (std::find(m.classes.begin(), m.classes.end(), c.get<std::string>()) != m.classes.end())
                throw DatasetError("duplicate class '" + c.get<std::string>() + "'");
            m.classes.push_back(c.get<std::string>());
        }
    }
    try {
        m.context_schema = context_schema_from_json(doc.value("context_schema", nlohmann::json()));
    } catch (const InvalidInput& e) {
        throw DatasetError(e.what());
    }

    if (!doc.contains("entries") || !doc["entries"].is_array()) throw DatasetError("manifest needs an 'entries' array");
    if (doc["entries"].empty()) throw DatasetError("manifest has no entries");

    std::size_t index = 0;
    for (const auto& item : doc["entries"]) {
        const std::string where = "entry " + std::to_string(index);
        auto fail = [&](const std::string& msg) { throw DatasetError(where + ": " + msg); };
        if (!item.is_object()) fail("must be an object");
        if (!item.contains("image") || !item["image"].is_string()) fail("missing 'image' path");

        DatasetEntry e;
        e.image = base_dir / item["image"].get<std::string>();
        if (!std::filesystem::is_regular_file(e.image)) fail("image not found: " + e.image.string());
        if (item.contains("mask") && !item["mask"].is_null()) {
            if (!item["mask"].is_string()) fail("'mask' must be a path");
            e.mask = base_dir / item["mask"].get<std::string>();
            if (!std::filesystem::is_regular_file(e.mask)) fail("mask not found: " + e.mask.string());
        }
        if (item.contains("label") && !item["label"].is_null()) {
            if (!item["label"].is_string()) fail("'label' must be a class name");
            const std::string label = item["label"].get<std::string>();
            const auto it = std::find(m.classes.begin(), m.classes.end(), label);
            if (it == m.classes.end()) fail("unknown label '" + label + "'");
            e.label = static_cast<int>(it - m.classes.begin());
        }
        if (item.contains("context") && !item["context"].is_null()) {
            if (m.context_schema.empty()) fail("has context but the manifest declares no context_schema");
            e.context = item["context"];
            try {
                e.encoded_context = encode_context(e.context, m.context_schema);
            } catch (const InvalidInput& err) {
                fail(err.what());
            }
        }
        m.entries.push_back(std::move(e));
        ++index;
    }
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), path.parent_path());
}

std::size_t import_context_csv_text(DatasetManifest& manifest, const std::string& text) {
    if (manifest.context_schema.empty()) throw DatasetError("manifest declares no context_schema");
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DatasetError("context CSV is empty");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || lower(header[0]) != "image") throw DatasetError("context CSV header must start with 'image'");
    const std::vector<std::string> fields(header.begin() + 1, header.end());
    if (fields != manifest.context_schema.field_names()) {
        std::string expected;
        for (const auto& n : manifest.context_schema.field_names()) expected += "," + n;
        throw DatasetError("context CSV header must be image" + expected);
    }

    std::size_t updated = 0, row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        const std::string where = "context CSV row " + std::to_string(row_no);
        if (cells.size() != header.size()) throw DatasetError(where + ": expected " + std::to_string(header.size()) + " cells");
        nlohmann::json raw = nlohmann::json::object();
        for (std::size_t i = 0; i < fields.size(); ++i) raw[fields[i]] = cells[i + 1];
        std::vector<double> encoded;
        try {
            encoded = encode_context(raw, manifest.context_schema);
        } catch (const InvalidInput& e) {
            throw DatasetError(where + ": " + e.what());
        }
        const std::string image = std::filesystem::path(cells[0]).filename().string();
        for (auto& e : manifest.entries)
            if (e.id() == image) {
                e.context = raw;
                e.encoded_context = encoded;
                ++updated;
            }
    }
    return updated;
}

std::size_t import_context_csv(DatasetManifest& manifest, const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw DatasetError("cannot open context CSV " + csv_path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return import_context_csv_text(manifest, ss.str());
}

BinaryMask load_standard_mask(const std::filesystem::path& path) {
    const BinaryMask mask = read_mask(path);
    if (mask.width() == kStandardWidth && mask.height() == kStandardHeight) return mask;
    return resize_nearest(mask, kStandardWidth, kStandardHeight);
}

}  // namespace psl
