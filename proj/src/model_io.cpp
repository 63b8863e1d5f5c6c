#include "psl/model_io.hpp"

#include <fstream>
#include <sstream>

namespace psl {

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw InvalidInput(std::string("model: '") + what + "' must be a non-empty matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw InvalidInput(std::string("model: '") + what + "' rows differ in length");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

}  // namespace

std::string model_to_json(const ModelFile& model) {
    const Classifier& c = model.classifier;
    nlohmann::json doc;
    doc["format"] = "psl-relm";
    doc["version"] = kModelFormatVersion;
    doc["class_labels"] = c.relm.class_labels;
    doc["context_schema"] = context_schema_to_json(model.context_schema);
    doc["hyperparameters"] = {{"hidden", c.relm.params.hidden},
                              {"gamma_exp", c.relm.params.gamma_exp},
                              {"activation", "sigmoid"}};
    doc["seed"] = c.relm.params.seed;
    doc["scaler"] = {{"min", c.scaler.min}, {"max", c.scaler.max}};
    doc["W"] = matrix_json(c.relm.W);
    doc["b"] = std::vector<double>(c.relm.b.data(), c.relm.b.data() + c.relm.b.size());
    doc["beta"] = matrix_json(c.relm.beta);
    doc["metadata"] = model.metadata;
    return doc.dump();
}

ModelFile model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("model is not valid JSON: ") + e.what());
    }
    try {
        if (doc.value("format", std::string()) != "psl-relm") throw InvalidInput("not a psl-relm model file");
        if (doc.at("version").get<int>() != kModelFormatVersion)
            throw InvalidInput("unsupported model version " + doc.at("version").dump());
        ModelFile m;
        Classifier& c = m.classifier;
        c.relm.class_labels = doc.at("class_labels").get<std::vector<std::string>>();
        m.context_schema = context_schema_from_json(doc.at("context_schema"));
        c.relm.params.hidden = doc.at("hyperparameters").at("hidden").get<int>();
        c.relm.params.gamma_exp = doc.at("hyperparameters").at("gamma_exp").get<double>();
        c.relm.params.seed = doc.at("seed").get<std::uint64_t>();
        c.scaler.min = doc.at("scaler").at("min").get<std::vector<double>>();
        c.scaler.max = doc.at("scaler").at("max").get<std::vector<double>>();
        c.relm.W = matrix_from(doc.at("W"), "W");
        const auto b = doc.at("b").get<std::vector<double>>();
        c.relm.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
        c.relm.beta = matrix_from(doc.at("beta"), "beta");
        m.metadata = doc.value("metadata", nlohmann::json::object());

        const auto d = c.relm.W.rows();
        if (c.scaler.min.size() != c.scaler.max.size() || static_cast<Eigen::Index>(c.scaler.min.size()) != c.relm.W.cols())
            throw InvalidInput("model: scaler and W disagree on the input dimension");
        if (c.relm.b.size() != d || c.relm.beta.rows() != d || d != c.relm.params.hidden)
            throw InvalidInput("model: hidden layer sizes disagree");
        if (c.relm.beta.cols() != static_cast<Eigen::Index>(c.relm.class_labels.size()))
            throw InvalidInput("model: beta columns do not match the class labels");
        if (c.scaler.min.size() != m.expected_input_dim())
            throw InvalidInput("model: input dimension does not match 59 features plus the context schema");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("model file is malformed: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model " + path.string());
    out << model_to_json(model) << '\n';
    if (!out) throw std::runtime_error("failed writing model " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace psl
