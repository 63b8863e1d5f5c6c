#include "psl/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "psl/dataset.hpp"
#include "psl/evaluation.hpp"
#include "psl/image_io.hpp"
#include "psl/imaging.hpp"
#include "psl/model_io.hpp"
#include "psl/pipeline.hpp"
#include "psl/rng.hpp"
#include "psl/service.hpp"

namespace psl {

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot write " + path);
        }
        os_ = path.empty() ? &fallback : &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

struct ClassifierOptions {
    std::string manifest;
    std::string context_csv;
    bool no_context = false;
    int hidden = kDefaultHidden;
    double gamma_exp = kDefaultGammaExp;
    int runs = 50;
    std::uint64_t seed = 0;
    int smote_k = kSmoteNeighbours;
    std::string positive;
};

void add_classifier_options(CLI::App* cmd, ClassifierOptions& o) {
    cmd->add_option("--manifest", o.manifest, "Dataset manifest (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--context-csv", o.context_csv, "Context answers, header: image,<schema fields>")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--no-context", o.no_context, "Use image features only");
    cmd->add_option("--hidden", o.hidden, "Hidden nodes d")->check(CLI::PositiveNumber);
    cmd->add_option("--gamma-exp", o.gamma_exp, "Regularisation exponent, gamma = 10^value");
    cmd->add_option("--seed", o.seed, "Master random seed");
    cmd->add_option("--smote-k", o.smote_k, "SMOTE neighbours")->check(CLI::PositiveNumber);
    cmd->add_option("--positive", o.positive, "Positive class for binary metrics (default: second class)");
}

struct PreparedData {
    DatasetManifest manifest;
    SampleSet samples;
    bool use_context = false;
    std::vector<EntryFailure> failures;
};

PreparedData prepare(const ClassifierOptions& o, std::ostream& err) {
    PreparedData d;
    d.manifest = load_manifest(o.manifest);
    if (!o.context_csv.empty()) {
        const std::size_t n = import_context_csv(d.manifest, o.context_csv);
        err << "context: " << n << " entries updated from " << o.context_csv << '\n';
    }
    d.use_context = !o.no_context && !d.manifest.context_schema.empty();
    const FeatureTable table = extract_manifest_features(d.manifest, [&](std::size_t i, std::size_t n) {
        err << "\rfeatures " << (i + 1) << "/" << n << std::flush;
    });
    err << '\n';
    for (const auto& f : table.failures) err << "skipped entry " << f.index << " (" << f.id << "): " << f.message << '\n';
    d.failures = table.failures;
    d.samples = build_sample_set(d.manifest, table, d.use_context);
    return d;
}

int positive_index(const ClassifierOptions& o, const std::vector<std::string>& classes) {
    if (o.positive.empty()) return 1;
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == o.positive) return static_cast<int>(i);
    throw InvalidInput("positive class '" + o.positive + "' is not in the manifest");
}

nlohmann::json metrics_json(const Metrics& m) {
    return {{"se", m.se}, {"sp", m.sp}, {"ac", m.ac}, {"bac", m.bac}, {"ji", m.ji}};
}

nlohmann::json loocv_json(const LoocvReport& r) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : r.runs) runs.push_back({{"metrics", metrics_json(run.metrics)}, {"auc", run.auc}});
    return {{"folds", r.folds},
            {"runs", r.runs.size()},
            {"mean", metrics_json(r.summary.mean)},
            {"std", metrics_json(r.summary.stddev)},
            {"auc_mean", r.summary.auc_mean},
            {"auc_std", r.summary.auc_stddev},
            {"per_run", runs},
            {"flags", r.flags}};
}

void print_summary(std::ostream& os, const MetricSummary& s) {
    auto line = [&](const char* name, double mean, double sd) {
        os << name << " " << format_number(mean) << " +- " << format_number(sd) << '\n';
    };
    line("SE ", s.mean.se, s.stddev.se);
    line("SP ", s.mean.sp, s.stddev.sp);
    line("AC ", s.mean.ac, s.stddev.ac);
    line("BAC", s.mean.bac, s.stddev.bac);
    line("AUC", s.auc_mean, s.auc_stddev);
}

int cmd_segment(const std::string& image, const std::string& seeds_path, double m, const std::string& out_path,
                bool original_size, std::ostream& out) {
    const RasterImage img = read_image(image);
    const SeedSet seeds = seeds_from_json(read_text(seeds_path));
    BinaryMask mask = segment(img, seeds, m);
    if (original_size) mask = resize_nearest(mask, img.width(), img.height());
    write_mask_png(out_path, mask);
    out << "wrote " << out_path << " (" << mask.width() << "x" << mask.height() << ", " << count_foreground(mask)
        << " lesion pixels)\n";
    return kExitOk;
}

int cmd_features(const std::string& image, const std::string& mask_path, const std::string& manifest_path,
                 std::string id, const std::string& out_path, bool no_header, std::ostream& out, std::ostream& err) {
    Output o(out_path, out);
    if (!no_header) write_feature_csv_header(o.stream());
    if (!manifest_path.empty()) {
        const DatasetManifest manifest = load_manifest(manifest_path);
        const FeatureTable table = extract_manifest_features(manifest);
        for (std::size_t r = 0; r < table.features.size(); ++r)
            write_feature_csv_row(o.stream(), manifest.entries[table.entry_index[r]].id(), table.features[r]);
        for (const auto& f : table.failures) err << "failed entry " << f.index << " (" << f.id << "): " << f.message << '\n';
        return table.failures.empty() ? kExitOk : kExitFailure;
    }
    if (image.empty() || mask_path.empty()) throw InvalidInput("features needs --image and --mask, or --manifest");
    const FeatureVector fv = lesion_features(read_image(image), load_standard_mask(mask_path));
    if (id.empty()) id = std::filesystem::path(image).filename().string();
    write_feature_csv_row(o.stream(), id, fv);
    for (const auto& f : fv.flags) err << "note: " << f << '\n';
    return kExitOk;
}

int cmd_train(const ClassifierOptions& o, int runs, const std::string& out_path, std::ostream& out, std::ostream& err) {
    PreparedData d = prepare(o, err);
    RelmParams params{o.hidden, o.gamma_exp, o.seed};
    ModelFile model;
    model.context_schema = d.use_context ? d.manifest.context_schema : ContextSchema{"none", {}};
    model.metadata = {{"dataset", d.manifest.name},
                      {"samples", d.samples.size()},
                      {"class_counts", d.samples.class_counts()},
                      {"smote_k", o.smote_k}};
    if (runs > 0) {
        LoocvParams lp{params, runs, o.smote_k, positive_index(o, d.manifest.classes)};
        const LoocvReport report = loocv_classify(d.samples, lp);
        model.metadata["loocv"] = loocv_json(report);
        out << "LOOCV estimate over " << runs << " runs:\n";
        print_summary(out, report.summary);
    }
    model.classifier = train_classifier(d.samples, params, o.smote_k);
    save_model(out_path, model);
    out << "wrote " << out_path << " (" << d.samples.size() << " samples, " << d.samples.dim << " inputs, classes";
    for (const auto& c : d.manifest.classes) out << ' ' << c;
    out << ")\n";
    return d.failures.empty() ? kExitOk : kExitFailure;
}

int cmd_eval_clf(const ClassifierOptions& o, const std::string& out_path, const std::string& roc_path,
                 std::ostream& out, std::ostream& err) {
    PreparedData d = prepare(o, err);
    LoocvParams lp{RelmParams{o.hidden, o.gamma_exp, o.seed}, o.runs, o.smote_k, positive_index(o, d.manifest.classes)};
    const LoocvReport report = loocv_classify(d.samples, lp);
    out << "LOOCV: " << report.folds << " folds x " << report.runs.size() << " runs, "
        << (d.use_context ? "image features + context" : "image features only") << '\n';
    print_summary(out, report.summary);
    for (const auto& f : report.flags) err << "note: " << f << '\n';
    if (!out_path.empty()) {
        Output o2(out_path, out);
        nlohmann::json doc = loocv_json(report);
        doc["classes"] = d.manifest.classes;
        doc["hyperparameters"] = {{"hidden", o.hidden}, {"gamma_exp", o.gamma_exp}, {"seed", o.seed}};
        o2.stream() << doc.dump(2) << '\n';
    }
    if (!roc_path.empty()) {
        if (d.samples.class_count() != 2) throw InvalidInput("--roc is only defined for two-class datasets");
        const int pos = lp.positive_class;
        std::vector<double> scores;
        std::vector<int> positive;
        for (std::size_t i = 0; i < d.samples.size(); ++i) {
            scores.push_back(report.runs.front().outputs[i][static_cast<std::size_t>(pos)]);
            positive.push_back(d.samples.labels[i] == pos);
        }
        const RocCurve roc = roc_auc(scores, positive);
        Output o3(roc_path, out);
        o3.stream() << "fpr,tpr\n";
        for (const auto& p : roc.points) o3.stream() << format_number(p.fpr) << ',' << format_number(p.tpr) << '\n';
    }
    return d.failures.empty() ? kExitOk : kExitFailure;
}

int cmd_eval_seg(const std::string& manifest_path, const SimEvalConfig& cfg, double m, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    Output o(out_path, out);
    o.stream() << "image,n_seeds,ji,se,sp,ac,bac,band\n";
    std::vector<double> jis;
    Metrics sum;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const DatasetEntry& e = manifest.entries[i];
        try {
            if (!e.has_mask()) throw InvalidInput("no ground-truth mask");
            const BinaryMask truth = load_standard_mask(e.mask);
            const Preprocessed pre = preprocess(resize_standard(read_image(e.image)));
            const Segmenter seg = [&](const SeedSet& seeds) {
                return refine_mask(isnn_label_pixels(pre.lab, seeds, {m}), seeds);
            };
            SimEvalConfig c = cfg;
            c.seed = derive_seed(cfg.seed, i);
            const SimEvalReport r = simulate_interactive_eval(truth, seg, c);
            const Metrics& b = r.best.metrics;
            o.stream() << e.id() << ',' << r.best.n_seeds << ',' << format_number(b.ji) << ',' << format_number(b.se)
                       << ',' << format_number(b.sp) << ',' << format_number(b.ac) << ',' << format_number(b.bac) << ','
                       << to_string(rate_jaccard(b.ji)) << '\n';
            jis.push_back(b.ji);
            sum.ji += b.ji;
            sum.se += b.se;
            sum.sp += b.sp;
            sum.ac += b.ac;
            sum.bac += b.bac;
            err << "\rsegmented " << (i + 1) << "/" << manifest.entries.size() << std::flush;
        } catch (const std::exception& ex) {
            ++failures;
            err << "\nfailed entry " << i << " (" << e.id() << "): " << ex.what() << '\n';
        }
    }
    err << '\n';
    if (jis.empty()) throw std::runtime_error("no entry could be evaluated");
    const double n = static_cast<double>(jis.size());
    const auto bands = jaccard_band_histogram(jis);
    std::ostream& summary = out_path.empty() ? err : out;
    summary << "images " << jis.size() << "  mean JI " << format_number(sum.ji / n) << "  SE " << format_number(sum.se / n)
            << "  SP " << format_number(sum.sp / n) << "  AC " << format_number(sum.ac / n) << '\n'
            << "bands Bad " << bands[0] << "  Good " << bands[1] << "  Excellent " << bands[2] << '\n';
    return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_serve(const std::string& host, int port, const std::string& manifest, const std::string& images,
              const std::string& model_path, std::ostream& out) {
    ImageCatalog catalog;
    if (!manifest.empty()) catalog = ImageCatalog::from_manifest(load_manifest(manifest));
    else if (!images.empty()) catalog = ImageCatalog::from_directory(images);
    else throw InvalidInput("serve needs --manifest or --images");
    std::optional<ModelFile> model;
    if (!model_path.empty()) model = load_model(model_path);
    Service service(std::move(catalog), std::move(model));
    HttpServer server(service);
    const int bound = server.bind(host, port);
    out << "serving " << service.list_images().body["images"].size() << " images on http://" << host << ":" << bound
        << '\n'
        << std::flush;
    server.run();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pigmented skin lesion segmentation, features and classification", "pslcad"};
    app.require_subcommand(1);

    std::string image, seeds, out_path, mask, manifest, id, roc_path, host = "127.0.0.1", images, model;
    double m = kDefaultCompactness;
    bool original_size = false, no_header = false;
    int port = 8080, train_runs = 0;

    auto* seg = app.add_subcommand("segment", "Segment one image from seed points");
    seg->add_option("--image", image, "Input image (PNG/JPEG)")->required()->check(CLI::ExistingFile);
    seg->add_option("--seeds", seeds, "Seeds JSON in 300x225 coordinates")->required()->check(CLI::ExistingFile);
    seg->add_option("--m", m, "Spatial weight")->check(CLI::NonNegativeNumber);
    seg->add_option("--out", out_path, "Output mask PNG (0/255)")->required();
    seg->add_flag("--original-size", original_size, "Write the mask at the input image size");

    auto* feat = app.add_subcommand("features", "Extract the 59 features as CSV");
    feat->add_option("--image", image, "Input image")->check(CLI::ExistingFile);
    feat->add_option("--mask", mask, "Lesion mask PNG")->check(CLI::ExistingFile);
    feat->add_option("--manifest", manifest, "Extract every entry with a mask")->check(CLI::ExistingFile);
    feat->add_option("--id", id, "Row identifier (default: image file name)");
    feat->add_option("--out", out_path, "CSV file (default: stdout)");
    feat->add_flag("--no-header", no_header, "Omit the header row");

    ClassifierOptions train_opts;
    train_opts.runs = 0;
    auto* train = app.add_subcommand("train", "Train a RELM classifier on a manifest");
    add_classifier_options(train, train_opts);
    train->add_option("--runs", train_runs, "Also estimate performance with this many LOOCV runs (0: skip)")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--out", out_path, "Model JSON")->required();

    SimEvalConfig sim;
    auto* eval_seg = app.add_subcommand("eval-seg", "Simulated interactive segmentation evaluation");
    eval_seg->add_option("--manifest", manifest, "Manifest with ground-truth masks")->required()->check(CLI::ExistingFile);
    eval_seg->add_option("--max-seeds", sim.max_input_seeds, "Largest simulated seed count")->check(CLI::Range(2, 1000));
    eval_seg->add_option("--max-eval", sim.max_evaluation, "Repetitions per seed count")->check(CLI::PositiveNumber);
    eval_seg->add_option("--seed", sim.seed, "Random seed");
    eval_seg->add_option("--m", m, "Spatial weight")->check(CLI::NonNegativeNumber);
    eval_seg->add_option("--out", out_path, "Per-image CSV (default: stdout)");

    ClassifierOptions clf_opts;
    auto* eval_clf = app.add_subcommand("eval-clf", "Leave-one-out evaluation averaged over runs");
    add_classifier_options(eval_clf, clf_opts);
    eval_clf->add_option("--runs", clf_opts.runs, "Number of LOOCV runs")->check(CLI::PositiveNumber);
    eval_clf->add_option("--out", out_path, "JSON report");
    eval_clf->add_option("--roc", roc_path, "ROC points of the first run (CSV, two-class only)");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--manifest", manifest, "Images (and ground truth) from a manifest")->check(CLI::ExistingFile);
    serve->add_option("--images", images, "Images from a directory")->check(CLI::ExistingDirectory);
    serve->add_option("--model", model, "Trained model JSON")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*seg) return cmd_segment(image, seeds, m, out_path, original_size, out);
        if (*feat) return cmd_features(image, mask, manifest, id, out_path, no_header, out, err);
        if (*train) return cmd_train(train_opts, train_runs, out_path, out, err);
        if (*eval_seg) return cmd_eval_seg(manifest, sim, m, out_path, out, err);
        if (*eval_clf) return cmd_eval_clf(clf_opts, out_path, roc_path, out, err);
        if (*serve) return cmd_serve(host, port, manifest, images, model, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace psl
