#include "psl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "psl/rng.hpp"

namespace psl {

namespace {

double ratio(std::uint64_t num, std::uint64_t den, const char* name, Diagnostics* diag) {
    if (den == 0) {
        flag(diag, std::string(name) + ": 0/0, reported as 0");
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<Pixel> sample_region(const std::vector<Pixel>& region, std::size_t k, Rng& rng, bool& replaced) {
    std::vector<Pixel> out;
    if (k > region.size()) {
        replaced = true;
        for (std::size_t i = 0; i < k; ++i) out.push_back(region[rng.index(region.size())]);
        return out;
    }
    std::set<std::size_t> taken;
    while (out.size() < k) {
        const std::size_t i = rng.index(region.size());
        if (taken.insert(i).second) out.push_back(region[i]);
    }
    return out;
}

Metrics average(const std::vector<Metrics>& ms) {
    Metrics a;
    for (const Metrics& m : ms) {
        a.se += m.se;
        a.sp += m.sp;
        a.ac += m.ac;
        a.bac += m.bac;
        a.ji += m.ji;
    }
    const double n = static_cast<double>(ms.size());
    a.se /= n;
    a.sp /= n;
    a.ac /= n;
    a.bac /= n;
    a.ji /= n;
    return a;
}

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

Metrics confusion_metrics(const ConfusionCounts& c, Diagnostics* diag) {
    if (c.total() == 0) throw InvalidInput("confusion counts are all zero");
    Metrics m;
    m.se = ratio(c.tp, c.tp + c.fn, "SE", diag);
    m.sp = ratio(c.tn, c.tn + c.fp, "SP", diag);
    m.ac = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    // One division instead of averaging two rounded ratios.
    const std::uint64_t pos = c.tp + c.fn, neg = c.tn + c.fp;
    if (pos > 0 && neg > 0)
        m.bac = (static_cast<double>(c.tp) * static_cast<double>(neg) + static_cast<double>(c.tn) * static_cast<double>(pos)) /
                (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    else
        m.bac = (m.se + m.sp) / 2.0;
    m.ji = ratio(c.tp, c.tp + c.fp + c.fn, "JI", diag);
    return m;
}

ConfusionCounts pixel_confusion(const BinaryMask& truth, const BinaryMask& predicted) {
    if (!truth.same_shape(predicted)) throw InvalidInput("ground truth and predicted masks differ in size");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth.values()[i] != 0, p = predicted.values()[i] != 0;
        if (t && p) ++c.tp;
        else if (!t && !p) ++c.tn;
        else if (p) ++c.fp;
        else ++c.fn;
    }
    return c;
}

std::vector<ConfusionCounts> one_vs_rest(std::span<const int> truth, std::span<const int> predicted, std::size_t classes) {
    if (truth.size() != predicted.size()) throw InvalidInput("truth and prediction lengths differ");
    std::vector<ConfusionCounts> out(classes);
    for (std::size_t i = 0; i < truth.size(); ++i)
        for (std::size_t c = 0; c < classes; ++c) {
            const bool t = truth[i] == static_cast<int>(c), p = predicted[i] == static_cast<int>(c);
            if (t && p) ++out[c].tp;
            else if (!t && !p) ++out[c].tn;
            else if (p) ++out[c].fp;
            else ++out[c].fn;
        }
    return out;
}

Metrics multiclass_metrics(const std::vector<ConfusionCounts>& per_class, Diagnostics* diag) {
    if (per_class.size() < 2) throw InvalidInput("multiclass metrics need at least two classes");
    std::vector<Metrics> kept;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        const ConfusionCounts& k = per_class[c];
        if (k.tp + k.fn == 0 && k.tp + k.fp == 0) {
            flag(diag, "class " + std::to_string(c) + " absent from truth and prediction, excluded");
            continue;
        }
        kept.push_back(confusion_metrics(k, diag));
    }
    if (kept.empty()) throw InvalidInput("no class occurs in truth or prediction");
    return average(kept);
}

RocCurve roc_auc(std::span<const double> scores, std::span<const int> positive) {
    if (scores.size() != positive.size()) throw InvalidInput("scores and labels differ in length");
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw InvalidInput("scores must be finite");
        n_pos += positive[i] != 0;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw InvalidInput("ROC needs at least one positive and one negative sample");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve roc;
    roc.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == s; ++i) {
            if (positive[order[i]]) ++tp;
            else ++fp;
        }
        const RocPoint p{static_cast<double>(fp) / static_cast<double>(n_neg),
                         static_cast<double>(tp) / static_cast<double>(n_pos)};
        const RocPoint& q = roc.points.back();
        roc.auc += (p.fpr - q.fpr) * (p.tpr + q.tpr) / 2.0;
        roc.points.push_back(p);
    }
    return roc;
}

SimEvalReport simulate_interactive_eval(const BinaryMask& truth, const Segmenter& segmenter, const SimEvalConfig& cfg) {
    if (cfg.max_input_seeds < 2) throw InvalidInput("max_input_seeds must be at least 2");
    if (cfg.max_evaluation < 1) throw InvalidInput("max_evaluation must be at least 1");
    std::vector<Pixel> fg, bg;
    for (int y = 0; y < truth.height(); ++y)
        for (int x = 0; x < truth.width(); ++x) (truth(x, y) ? fg : bg).push_back({x, y});
    if (fg.empty() || bg.empty()) throw InvalidInput("ground truth needs both lesion and background pixels");

    SimEvalReport report;
    Diagnostics diag;
    Rng rng(cfg.seed);
    bool have_best = false;
    bool replaced = false;
    bool failed = false;
    for (int n = 2; n <= cfg.max_input_seeds; ++n) {
        const std::size_t n_fg = static_cast<std::size_t>(n / 2);
        const std::size_t n_bg = static_cast<std::size_t>(n - n / 2);
        SimEvalEntry best_n;
        bool have_n = false;
        for (int e = 0; e < cfg.max_evaluation; ++e) {
            SimEvalEntry entry{n, e, {}, {}};
            for (const Pixel& p : sample_region(fg, n_fg, rng, replaced))
                entry.seeds.seeds.push_back({p.x, p.y, SeedLabel::Foreground});
            for (const Pixel& p : sample_region(bg, n_bg, rng, replaced))
                entry.seeds.seeds.push_back({p.x, p.y, SeedLabel::Background});
            BinaryMask predicted;
            try {
                predicted = segmenter(entry.seeds);
            } catch (const SegmentationError&) {
                failed = true;
                predicted = BinaryMask(truth.width(), truth.height());
            }
            entry.metrics = confusion_metrics(pixel_confusion(truth, predicted));
            if (!have_n || entry.metrics.ji > best_n.metrics.ji) {
                best_n = entry;
                have_n = true;
            }
        }
        if (!have_best || best_n.metrics.ji > report.best.metrics.ji) {
            report.best = best_n;
            have_best = true;
        }
        report.per_count.push_back(std::move(best_n));
    }
    if (replaced) diag.flag("ground truth region smaller than the requested seed count, sampled with replacement");
    if (failed) diag.flag("segmenter rejected some seed sets, scored as empty masks");
    report.flags = std::move(diag.messages);
    return report;
}

JaccardBand rate_jaccard(double ji) {
    if (!(ji >= 0.0 && ji <= 1.0)) throw InvalidInput("Jaccard index must lie in [0, 1]");
    if (ji < 0.65) return JaccardBand::Bad;
    if (ji < 0.9) return JaccardBand::Good;
    return JaccardBand::Excellent;
}

const char* to_string(JaccardBand band) {
    switch (band) {
        case JaccardBand::Bad: return "Bad";
        case JaccardBand::Good: return "Good";
        case JaccardBand::Excellent: return "Excellent";
    }
    return "?";
}

std::array<std::size_t, 3> jaccard_band_histogram(std::span<const double> ji_values) {
    std::array<std::size_t, 3> h{};
    for (double ji : ji_values) ++h[static_cast<std::size_t>(rate_jaccard(ji))];
    return h;
}

RunResult score_predictions(std::span<const int> truth, const std::vector<std::vector<double>>& outputs,
                            std::size_t classes, int positive_class, Diagnostics* diag) {
    RunResult r;
    r.outputs = outputs;
    for (const auto& o : outputs)
        r.predicted.push_back(static_cast<int>(std::max_element(o.begin(), o.end()) - o.begin()));

    auto auc_for = [&](std::size_t c) -> std::optional<double> {
        std::vector<double> scores;
        std::vector<int> pos;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            scores.push_back(outputs[i][c]);
            pos.push_back(truth[i] == static_cast<int>(c));
        }
        const auto n_pos = std::count(pos.begin(), pos.end(), 1);
        if (n_pos == 0 || n_pos == static_cast<long>(pos.size())) return std::nullopt;
        return roc_auc(scores, pos).auc;
    };

    if (classes == 2) {
        if (positive_class < 0 || positive_class > 1) throw InvalidInput("positive class must be 0 or 1");
        r.metrics = confusion_metrics(one_vs_rest(truth, r.predicted, 2)[static_cast<std::size_t>(positive_class)], diag);
        const auto auc = auc_for(static_cast<std::size_t>(positive_class));
        if (auc) r.auc = *auc;
        else flag(diag, "AUC undefined: a single class in truth");
    } else {
        r.metrics = multiclass_metrics(one_vs_rest(truth, r.predicted, classes), diag);
        double sum = 0.0;
        int used = 0;
        for (std::size_t c = 0; c < classes; ++c)
            if (const auto auc = auc_for(c)) {
                sum += *auc;
                ++used;
            }
        r.auc = used > 0 ? sum / used : 0.0;
    }
    return r;
}

LoocvReport loocv_classify(const SampleSet& data, const LoocvParams& params,
                           const std::function<void(const FoldInfo&)>& on_fold) {
    if (params.runs < 1) throw InvalidInput("LOOCV needs at least one run");
    if (data.size() < 2) throw InvalidInput("LOOCV needs at least two samples");
    const auto counts = data.class_counts();
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; }) < 2)
        throw InvalidInput("LOOCV needs samples from at least two classes");

    LoocvReport report;
    report.folds = data.size();
    std::set<std::string> flags;
    for (int run = 0; run < params.runs; ++run) {
        const std::uint64_t run_seed = derive_seed(params.relm.seed, static_cast<std::uint64_t>(run));
        std::vector<std::vector<double>> outputs;
        outputs.reserve(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            const SampleSet train = data.without(i);
            RelmParams p = params.relm;
            p.seed = derive_seed(run_seed, i);
            const Classifier c = train_classifier(train, p, params.smote_k, false);
            for (const auto& f : c.flags)
                if (f.rfind("scaler:", 0) != 0) flags.insert(f);
            if (on_fold) on_fold(FoldInfo{run, i, train, c.scaler});
            outputs.push_back(c.predict(data.row(i)).outputs);
        }
        Diagnostics diag;
        report.runs.push_back(score_predictions(data.labels, outputs, data.class_count(), params.positive_class, &diag));
        flags.insert(diag.messages.begin(), diag.messages.end());
    }

    std::vector<Metrics> ms;
    std::vector<double> se, sp, ac, bac, ji, auc;
    for (const RunResult& r : report.runs) {
        ms.push_back(r.metrics);
        se.push_back(r.metrics.se);
        sp.push_back(r.metrics.sp);
        ac.push_back(r.metrics.ac);
        bac.push_back(r.metrics.bac);
        ji.push_back(r.metrics.ji);
        auc.push_back(r.auc);
    }
    report.summary.mean = average(ms);
    report.summary.stddev = {sample_stddev(se), sample_stddev(sp), sample_stddev(ac), sample_stddev(bac),
                             sample_stddev(ji)};
    report.summary.auc_mean = std::accumulate(auc.begin(), auc.end(), 0.0) / static_cast<double>(auc.size());
    report.summary.auc_stddev = sample_stddev(auc);
    report.flags.assign(flags.begin(), flags.end());
    return report;
}

}  // namespace psl
