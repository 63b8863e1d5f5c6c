#include "psl/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psl/rng.hpp"
#include "psl/simd/kernels.hpp"

namespace psl {

void SampleSet::add(std::span<const double> features, int label) {
    if (features.size() != dim)
        throw InvalidInput("row has " + std::to_string(features.size()) + " features, expected " + std::to_string(dim));
    if (label < 0 || static_cast<std::size_t>(label) >= class_names.size())
        throw InvalidInput("label " + std::to_string(label) + " is not a known class");
    values.insert(values.end(), features.begin(), features.end());
    labels.push_back(label);
}

std::vector<std::size_t> SampleSet::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    return counts;
}

SampleSet SampleSet::without(std::size_t i) const {
    SampleSet out(dim, class_names);
    out.values.reserve(values.size() - dim);
    out.labels.reserve(labels.size() - 1);
    for (std::size_t r = 0; r < size(); ++r)
        if (r != i) out.add(row(r), labels[r]);
    return out;
}

ScalerStats fit_minmax(const SampleSet& train, Diagnostics* diag) {
    if (train.size() == 0) throw InvalidInput("cannot fit a scaler on an empty sample set");
    ScalerStats s;
    s.min.assign(train.row(0).begin(), train.row(0).end());
    s.max = s.min;
    for (std::size_t r = 1; r < train.size(); ++r) {
        const auto row = train.row(r);
        for (std::size_t j = 0; j < train.dim; ++j) {
            s.min[j] = std::min(s.min[j], row[j]);
            s.max[j] = std::max(s.max[j], row[j]);
        }
    }
    for (std::size_t j = 0; j < s.dim(); ++j)
        if (s.constant(j)) flag(diag, "scaler: feature " + std::to_string(j) + " is constant");
    return s;
}

std::vector<double> apply_minmax(const ScalerStats& stats, std::span<const double> row) {
    if (row.size() != stats.dim())
        throw InvalidInput("row has " + std::to_string(row.size()) + " features, scaler expects " +
                           std::to_string(stats.dim()));
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        out[j] = stats.constant(j) ? 0.0 : (row[j] - stats.min[j]) / (stats.max[j] - stats.min[j]);
    return out;
}

SampleSet apply_minmax(const ScalerStats& stats, const SampleSet& set) {
    SampleSet out(set.dim, set.class_names);
    out.values.reserve(set.values.size());
    for (std::size_t r = 0; r < set.size(); ++r) out.add(apply_minmax(stats, set.row(r)), set.labels[r]);
    return out;
}

SampleSet smote_balance(const SampleSet& train, int k, std::uint64_t seed, Diagnostics* diag,
                        bool duplicate_singletons) {
    if (k < 1) throw InvalidInput("SMOTE needs k >= 1");
    SampleSet out = train;
    const auto counts = train.class_counts();
    const std::size_t majority = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    Rng rng(seed);

    for (std::size_t c = 0; c < counts.size(); ++c) {
        const std::size_t n = counts[c];
        if (n == majority) continue;
        const std::string& name = train.class_names[c];
        if (n == 0) {
            flag(diag, "SMOTE: class " + name + " has no samples, left empty");
            continue;
        }
        std::vector<std::size_t> members;
        for (std::size_t r = 0; r < train.size(); ++r)
            if (train.labels[r] == static_cast<int>(c)) members.push_back(r);

        if (n == 1) {
            if (!duplicate_singletons) {
                flag(diag, "SMOTE: class " + name + " has a single sample, not oversampled");
                continue;
            }
            flag(diag, "SMOTE: class " + name + " has a single sample, duplicated");
            for (std::size_t s = n; s < majority; ++s) out.add(train.row(members[0]), static_cast<int>(c));
            continue;
        }

        std::vector<double> block;
        block.reserve(n * train.dim);
        for (std::size_t r : members) block.insert(block.end(), train.row(r).begin(), train.row(r).end());

        const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), n - 1);
        std::vector<std::vector<std::size_t>> neighbours(n);
        std::vector<double> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            simd::squared_distances(train.row(members[i]), block.data(), n, dist);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
            order.resize(k_eff);
            neighbours[i] = std::move(order);
        }

        std::vector<double> synthetic(train.dim);
        for (std::size_t s = 0; s < majority - n; ++s) {
            const std::size_t i = s % n;
            const std::size_t j = neighbours[i][rng.index(k_eff)];
            const double u = rng.uniform();
            const auto base = train.row(members[i]);
            const auto nn = train.row(members[j]);
            for (std::size_t f = 0; f < train.dim; ++f) synthetic[f] = base[f] + u * (nn[f] - base[f]);
            out.add(synthetic, static_cast<int>(c));
        }
    }
    return out;
}

double RelmParams::gamma() const { return std::pow(10.0, gamma_exp); }

Eigen::MatrixXd hidden_layer(const Eigen::MatrixXd& W, const Eigen::VectorXd& b, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd z = X * W.transpose();
    z.rowwise() += b.transpose();
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::MatrixXd relm_output_weights(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be positive and finite");
    if (H.rows() != T.rows()) throw InvalidInput("H and T must have the same number of rows");
    Eigen::MatrixXd A = H.transpose() * H;
    A.diagonal().array() += 1.0 / gamma;
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw std::runtime_error("RELM system is not positive definite");
    Eigen::MatrixXd beta = llt.solve(H.transpose() * T);
    if (!beta.allFinite()) throw std::runtime_error("RELM solve produced non-finite weights");
    return beta;
}

Eigen::MatrixXd one_hot(const SampleSet& set) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(set.size()),
                                              static_cast<Eigen::Index>(set.class_count()));
    for (std::size_t r = 0; r < set.size(); ++r) T(static_cast<Eigen::Index>(r), set.labels[r]) = 1.0;
    return T;
}

Eigen::MatrixXd to_matrix(const SampleSet& set) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(set.dim));
    for (std::size_t r = 0; r < set.size(); ++r)
        for (std::size_t j = 0; j < set.dim; ++j)
            X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = set.values[r * set.dim + j];
    return X;
}

RelmModel relm_train(const SampleSet& train, const RelmParams& params) {
    if (train.size() == 0) throw InvalidInput("cannot train on an empty sample set");
    if (params.hidden < 1) throw InvalidInput("hidden layer needs at least one node");
    RelmModel model;
    model.params = params;
    model.class_labels = train.class_names;

    const auto d = static_cast<Eigen::Index>(params.hidden);
    const auto n = static_cast<Eigen::Index>(train.dim);
    Rng rng(params.seed);
    model.W.resize(d, n);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < n; ++j) model.W(i, j) = rng.uniform(-1.0, 1.0);
    model.b.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) model.b(i) = rng.uniform(-1.0, 1.0);

    const Eigen::MatrixXd H = hidden_layer(model.W, model.b, to_matrix(train));
    model.beta = relm_output_weights(H, one_hot(train), params.gamma());
    return model;
}

Prediction relm_predict(const RelmModel& model, std::span<const double> x) {
    if (x.size() != model.input_dim())
        throw InvalidInput("feature vector has " + std::to_string(x.size()) + " values, model expects " +
                           std::to_string(model.input_dim()));
    Eigen::MatrixXd row(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) row(0, static_cast<Eigen::Index>(j)) = x[j];
    const Eigen::MatrixXd out = hidden_layer(model.W, model.b, row) * model.beta;
    Prediction p;
    p.outputs.assign(out.data(), out.data() + out.size());
    p.label = static_cast<int>(std::max_element(p.outputs.begin(), p.outputs.end()) - p.outputs.begin());
    return p;
}

Prediction Classifier::predict(std::span<const double> raw_features) const {
    return relm_predict(relm, apply_minmax(scaler, raw_features));
}

Classifier train_classifier(const SampleSet& raw, const RelmParams& params, int smote_k, bool duplicate_singletons) {
    Classifier c;
    Diagnostics diag;
    c.scaler = fit_minmax(raw, &diag);
    const SampleSet balanced = smote_balance(apply_minmax(c.scaler, raw), smote_k, derive_seed(params.seed, 1), &diag,
                                                duplicate_singletons);
    c.relm = relm_train(balanced, params);
    c.flags = std::move(diag.messages);
    return c;
}

std::vector<double> fuse_context(const FeatureVector& fv, std::span<const double> context) {
    std::vector<double> row(fv.values.begin(), fv.values.end());
    row.insert(row.end(), context.begin(), context.end());
    return row;
}

}  // namespace psl
