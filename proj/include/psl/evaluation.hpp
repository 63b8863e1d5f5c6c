#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psl/classifier.hpp"
#include "psl/geometry.hpp"
#include "psl/segmentation.hpp"

namespace psl {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
    double se = 0.0;
    double sp = 0.0;
    double ac = 0.0;
    double bac = 0.0;
    double ji = 0.0;
};

/// 0/0 ratios become 0 and are flagged; all-zero counts throw.
Metrics confusion_metrics(const ConfusionCounts& c, Diagnostics* diag = nullptr);

/// Pixel-level counts with the lesion as the positive class.
ConfusionCounts pixel_confusion(const BinaryMask& truth, const BinaryMask& predicted);

/// One-vs-rest table per class.
std::vector<ConfusionCounts> one_vs_rest(std::span<const int> truth, std::span<const int> predicted, std::size_t classes);

/// Macro average of per-class metrics. Classes absent from both truth and
/// prediction are excluded and flagged.
Metrics multiclass_metrics(const std::vector<ConfusionCounts>& per_class, Diagnostics* diag = nullptr);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // from (0,0) to (1,1)
    double auc = 0.0;
};

/// Thresholds at the distinct scores (tied scores move together), trapezoidal area.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> positive);

struct SimEvalConfig {
    int max_input_seeds = 10;
    int max_evaluation = 20;
    std::uint64_t seed = 0;
};

using Segmenter = std::function<BinaryMask(const SeedSet&)>;

struct SimEvalEntry {
    int n_seeds = 0;
    int evaluation = 0;
    Metrics metrics;
    SeedSet seeds;
};

struct SimEvalReport {
    SimEvalEntry best;
    std::vector<SimEvalEntry> per_count;  // best entry for each seed count n = 2..max
    std::vector<std::string> flags;
};

/// Simulated expert: for n = 2..max_input_seeds, floor(n/2) foreground and
/// ceil(n/2) background seeds drawn uniformly from the ground truth, the
/// segmentation repeated max_evaluation times, the best-JI run kept.
SimEvalReport simulate_interactive_eval(const BinaryMask& truth, const Segmenter& segmenter, const SimEvalConfig& cfg);

enum class JaccardBand { Bad, Good, Excellent };

JaccardBand rate_jaccard(double ji);
const char* to_string(JaccardBand band);
std::array<std::size_t, 3> jaccard_band_histogram(std::span<const double> ji_values);

struct LoocvParams {
    RelmParams relm;  // relm.seed is the master seed
    int runs = 50;
    int smote_k = kSmoteNeighbours;
    int positive_class = 1;  // used when there are exactly two classes
};

struct FoldInfo {
    int run = 0;
    std::size_t held_out = 0;
    const SampleSet& train;
    const ScalerStats& scaler;
};

struct RunResult {
    Metrics metrics;
    double auc = 0.0;
    std::vector<int> predicted;
    std::vector<std::vector<double>> outputs;
};

struct MetricSummary {
    Metrics mean;
    Metrics stddev;  // sample standard deviation across runs, 0 for a single run
    double auc_mean = 0.0;
    double auc_stddev = 0.0;
};

struct LoocvReport {
    std::vector<RunResult> runs;
    MetricSummary summary;
    std::size_t folds = 0;
    std::vector<std::string> flags;
};

/// Each run uses a seed derived from the master seed; each fold refits the
/// scaler, SMOTE and RELM on the remaining samples only.
LoocvReport loocv_classify(const SampleSet& data, const LoocvParams& params,
                           const std::function<void(const FoldInfo&)>& on_fold = {});

/// Metrics and AUC for one set of held-out predictions.
RunResult score_predictions(std::span<const int> truth, const std::vector<std::vector<double>>& outputs,
                            std::size_t classes, int positive_class, Diagnostics* diag = nullptr);

}  // namespace psl
