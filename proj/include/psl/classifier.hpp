#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psl/features.hpp"
#include "psl/geometry.hpp"

namespace psl {

/// Labelled rows with a fixed feature dimension. Labels index class_names.
struct SampleSet {
    std::size_t dim = 0;
    std::vector<double> values;  // row-major
    std::vector<int> labels;
    std::vector<std::string> class_names;

    SampleSet() = default;
    SampleSet(std::size_t dimension, std::vector<std::string> classes)
        : dim(dimension), class_names(std::move(classes)) {}

    std::size_t size() const { return labels.size(); }
    std::size_t class_count() const { return class_names.size(); }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
    void add(std::span<const double> features, int label);
    std::vector<std::size_t> class_counts() const;

    /// Copy without row i.
    SampleSet without(std::size_t i) const;
};

struct ScalerStats {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dim() const { return min.size(); }
    bool constant(std::size_t j) const { return max[j] == min[j]; }
};

ScalerStats fit_minmax(const SampleSet& train, Diagnostics* diag = nullptr);

/// (x - min) / (max - min), constant features to 0, no clamping.
std::vector<double> apply_minmax(const ScalerStats& stats, std::span<const double> row);
SampleSet apply_minmax(const ScalerStats& stats, const SampleSet& set);

inline constexpr int kSmoteNeighbours = 5;

/// Oversamples every class up to the majority count. Synthetic rows are
/// appended after the originals. A single-sample class is duplicated, or
/// left as is when duplicate_singletons is false.
SampleSet smote_balance(const SampleSet& train, int k, std::uint64_t seed, Diagnostics* diag = nullptr,
                        bool duplicate_singletons = true);

inline constexpr int kDefaultHidden = 150;
inline constexpr double kDefaultGammaExp = -2.0;

struct RelmParams {
    int hidden = kDefaultHidden;
    double gamma_exp = kDefaultGammaExp;  // gamma = 10^gamma_exp
    std::uint64_t seed = 0;

    double gamma() const;
};

struct RelmModel {
    Eigen::MatrixXd W;     // hidden x inputs
    Eigen::VectorXd b;     // hidden
    Eigen::MatrixXd beta;  // hidden x classes
    RelmParams params;
    std::vector<std::string> class_labels;

    std::size_t input_dim() const { return static_cast<std::size_t>(W.cols()); }
};

/// Logistic hidden-layer outputs, one row per input row.
Eigen::MatrixXd hidden_layer(const Eigen::MatrixXd& W, const Eigen::VectorXd& b, const Eigen::MatrixXd& X);

/// Solves (I/gamma + H^T H) beta = H^T T.
Eigen::MatrixXd relm_output_weights(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T, double gamma);

/// One-hot targets (1 for the true class, 0 otherwise).
Eigen::MatrixXd one_hot(const SampleSet& set);
Eigen::MatrixXd to_matrix(const SampleSet& set);

/// Trains on already scaled (and balanced) rows.
RelmModel relm_train(const SampleSet& train, const RelmParams& params);

struct Prediction {
    std::vector<double> outputs;
    int label = 0;
};

Prediction relm_predict(const RelmModel& model, std::span<const double> scaled_features);

/// Full training recipe: min-max fit, SMOTE, RELM. The classifier keeps
/// the scaler so raw feature rows can be classified directly.
struct Classifier {
    ScalerStats scaler;
    RelmModel relm;
    std::vector<std::string> flags;

    std::size_t input_dim() const { return scaler.dim(); }
    Prediction predict(std::span<const double> raw_features) const;
};

Classifier train_classifier(const SampleSet& raw, const RelmParams& params, int smote_k = kSmoteNeighbours,
                            bool duplicate_singletons = true);

/// Image features followed by the encoded context (if any).
std::vector<double> fuse_context(const FeatureVector& fv, std::span<const double> context = {});

}  // namespace psl
