#include "psl/service.hpp"

#include <algorithm>
#include <set>

#include "httplib.h"
#include "psl/evaluation.hpp"
#include "psl/features.hpp"
#include "psl/image_io.hpp"
#include "psl/imaging.hpp"

namespace psl {

namespace {

ApiResponse error(int status, const std::string& message) {
    return {status, {{"error", message}, {"status", status}}};
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '/') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

nlohmann::json parse_body(const std::string& body) {
    if (body.empty()) return nlohmann::json::object();
    nlohmann::json doc = nlohmann::json::parse(body);
    if (!doc.is_object()) throw InvalidInput("request body must be a JSON object");
    return doc;
}

nlohmann::json metrics_json(const Metrics& m) {
    return {{"ji", m.ji}, {"se", m.se}, {"sp", m.sp}, {"ac", m.ac}, {"bac", m.bac}};
}

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

void ImageCatalog::add(CatalogImage image) {
    if (find(image.id) != nullptr) throw InvalidInput("duplicate image id '" + image.id + "'");
    images_.push_back(std::move(image));
}

const CatalogImage* ImageCatalog::find(const std::string& id) const {
    for (const auto& img : images_)
        if (img.id == id) return &img;
    return nullptr;
}

ImageCatalog ImageCatalog::from_manifest(const DatasetManifest& manifest) {
    ImageCatalog c;
    for (const auto& e : manifest.entries) {
        CatalogImage img{e.id(), e.image, e.mask, std::nullopt};
        if (e.label) img.label = manifest.classes[static_cast<std::size_t>(*e.label)];
        c.add(std::move(img));
    }
    return c;
}

ImageCatalog ImageCatalog::from_directory(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    ImageCatalog c;
    for (const auto& f : files) c.add({f.filename().string(), f, {}, std::nullopt});
    return c;
}

Service::Service(ImageCatalog catalog, std::optional<ModelFile> model)
    : catalog_(std::move(catalog)), model_(std::move(model)) {}

ApiResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) {
    const auto parts = split_path(path);
    try {
        if (parts.size() >= 2 && parts[0] == "api" && parts[1] == "images") {
            if (method != "GET") return error(405, "method not allowed");
            if (parts.size() == 2) return list_images();
            if (parts.size() == 3) return get_image(parts[2]);
        }
        if (parts.size() >= 2 && parts[0] == "api" && parts[1] == "sessions") {
            if (parts.size() == 2) return method == "POST" ? create_session(body) : error(405, "method not allowed");
            if (parts.size() == 3) return method == "GET" ? get_session(parts[2]) : error(405, "method not allowed");
            if (parts.size() == 4 && parts[3] == "seeds")
                return method == "POST" ? post_seeds(parts[2], body) : error(405, "method not allowed");
            if (parts.size() == 4 && parts[3] == "classify")
                return method == "POST" ? classify(parts[2], body) : error(405, "method not allowed");
        }
        return error(404, "no such endpoint: " + method + " " + path);
    } catch (const nlohmann::json::exception& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    } catch (const InvalidInput& e) {
        return error(422, e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

ApiResponse Service::list_images() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& img : catalog_.images()) {
        nlohmann::json item{{"id", img.id}, {"has_mask", !img.mask.empty()}};
        if (img.label) item["label"] = *img.label;
        list.push_back(std::move(item));
    }
    return {200, {{"images", list}}};
}

ApiResponse Service::get_image(const std::string& id) const {
    const CatalogImage* img = catalog_.find(id);
    if (img == nullptr) return error(404, "unknown image '" + id + "'");
    const RasterImage standard = resize_standard(read_image(img->path));
    nlohmann::json body{{"id", img->id},
                        {"width", standard.width()},
                        {"height", standard.height()},
                        {"original_width", standard.original_width()},
                        {"original_height", standard.original_height()},
                        {"has_mask", !img->mask.empty()},
                        {"image_png_base64", base64_encode(encode_png(standard))}};
    if (img->label) body["label"] = *img->label;
    return {200, body};
}

ApiResponse Service::create_session(const std::string& body) {
    const nlohmann::json req = parse_body(body);
    if (!req.contains("image_id") || !req["image_id"].is_string()) return error(422, "body needs an 'image_id' string");
    const CatalogImage* img = catalog_.find(req["image_id"].get<std::string>());
    if (img == nullptr) return error(404, "unknown image '" + req["image_id"].get<std::string>() + "'");

    auto s = std::make_shared<Session>();
    s->id = "s" + std::to_string(next_id_++);
    s->image_id = img->id;
    s->standardized = resize_standard(read_image(img->path));
    s->preprocessed = preprocess(s->standardized);
    if (!img->mask.empty()) s->truth = load_standard_mask(img->mask);
    if (req.contains("m")) {
        if (!req["m"].is_number() || req["m"].get<double>() < 0.0) return error(422, "'m' must be a number >= 0");
        s->m = req["m"].get<double>();
    }
    nlohmann::json out = session_json(*s);
    {
        std::lock_guard lock(sessions_mutex_);
        sessions_[s->id] = s;
    }
    return {201, out};
}

std::shared_ptr<Service::Session> Service::find_session(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

nlohmann::json Service::session_json(const Session& s) const {
    nlohmann::json out{{"session_id", s.id},
                       {"image_id", s.image_id},
                       {"width", kStandardWidth},
                       {"height", kStandardHeight},
                       {"m", s.m},
                       {"seeds", nlohmann::json::parse(seeds_to_json(s.seeds))},
                       {"has_mask", s.mask.has_value()},
                       {"has_ground_truth", s.truth.has_value()}};
    if (s.mask) {
        out["mask_png_base64"] = base64_encode(encode_mask_png(*s.mask));
        out["foreground_pixels"] = count_foreground(*s.mask);
        if (s.truth) out["metrics"] = metrics_json(confusion_metrics(pixel_confusion(*s.truth, *s.mask)));
    }
    if (s.diagnosis) out["diagnosis"] = *s.diagnosis;
    return out;
}

ApiResponse Service::get_session(const std::string& id) {
    const auto s = find_session(id);
    if (!s) return error(404, "unknown session '" + id + "'");
    std::lock_guard lock(s->mutex);
    return {200, session_json(*s)};
}

ApiResponse Service::post_seeds(const std::string& id, const std::string& body) {
    const auto s = find_session(id);
    if (!s) return error(404, "unknown session '" + id + "'");
    const nlohmann::json req = parse_body(body);
    const SeedSet delta = seeds_from_json(req.value("seeds", nlohmann::json::array()).dump());
    const bool reset = req.value("reset", false);

    std::lock_guard lock(s->mutex);
    double m = s->m;
    if (req.contains("m")) {
        if (!req["m"].is_number() || req["m"].get<double>() < 0.0) return error(422, "'m' must be a number >= 0");
        m = req["m"].get<double>();
    }

    SeedSet merged = reset ? SeedSet{} : s->seeds;
    for (const Seed& seed : delta.seeds) {
        if (seed.x < 0 || seed.y < 0 || seed.x >= kStandardWidth || seed.y >= kStandardHeight)
            return error(422, "seed (" + std::to_string(seed.x) + "," + std::to_string(seed.y) +
                                  ") is outside the 300x225 image");
        const auto same_pixel = std::find_if(merged.seeds.begin(), merged.seeds.end(),
                                             [&](const Seed& o) { return o.x == seed.x && o.y == seed.y; });
        if (same_pixel == merged.seeds.end()) merged.seeds.push_back(seed);
        else if (same_pixel->label != seed.label)
            return error(422, "seed (" + std::to_string(seed.x) + "," + std::to_string(seed.y) +
                                  ") already carries the other label");
    }
    s->seeds = merged;
    s->m = m;
    s->mask.reset();
    s->diagnosis.reset();

    if (merged.foreground_count() == 0 || merged.background_count() == 0) {
        ApiResponse r = error(422, "segmentation needs at least one foreground and one background seed");
        r.body["hint"] = "add at least one seed of each type";
        r.body["seeds"] = nlohmann::json::parse(seeds_to_json(merged));
        return r;
    }
    try {
        s->mask = refine_mask(isnn_label_pixels(s->preprocessed.lab, merged, {m}), merged);
    } catch (const SegmentationError& e) {
        return error(422, e.what());
    }
    return {200, session_json(*s)};
}

ApiResponse Service::classify(const std::string& id, const std::string& body) {
    const auto s = find_session(id);
    if (!s) return error(404, "unknown session '" + id + "'");
    if (!model_) return error(503, "no classification model is loaded");
    const nlohmann::json req = parse_body(body);

    std::lock_guard lock(s->mutex);
    if (!s->mask) return error(409, "session has no segmentation yet; post seeds first");

    const ModelFile& model = *model_;
    std::vector<double> context;
    if (!model.context_schema.empty()) {
        if (!req.contains("context") || req["context"].is_null())
            return error(422, "model expects context fields: " +
                                  nlohmann::json(model.context_schema.field_names()).dump());
        try {
            context = encode_context(req["context"], model.context_schema);
        } catch (const InvalidInput& e) {
            return error(422, std::string("context does not match the model schema: ") + e.what());
        }
    }

    const FeatureVector fv = extract_feature_vector(s->preprocessed.colour, *s->mask);
    const std::vector<double> row = fuse_context(fv, context);
    if (row.size() != model.classifier.input_dim())
        return error(422, "model expects " + std::to_string(model.classifier.input_dim()) + " inputs, got " +
                              std::to_string(row.size()));
    const Prediction p = model.classifier.predict(row);

    nlohmann::json features = nlohmann::json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) features[FeatureVector::names()[i]] = fv.values[i];
    nlohmann::json out{{"session_id", s->id},
                       {"label", model.classifier.relm.class_labels[static_cast<std::size_t>(p.label)]},
                       {"label_index", p.label},
                       {"outputs", p.outputs},
                       {"class_labels", model.classifier.relm.class_labels},
                       {"feature_names", FeatureVector::names()},
                       {"features", features},
                       {"feature_flags", fv.flags},
                       {"context_used", !context.empty()},
                       {"model",
                        {{"hidden", model.classifier.relm.params.hidden},
                         {"gamma_exp", model.classifier.relm.params.gamma_exp},
                         {"seed", model.classifier.relm.params.seed},
                         {"context_schema", context_schema_to_json(model.context_schema)},
                         {"metadata", model.metadata}}}};
    s->diagnosis = out;
    return {200, out};
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
    auto bridge = [&service](const std::string& method) {
        return [&service, method](const httplib::Request& req, httplib::Response& res) {
            const ApiResponse r = service.handle(method, req.path, req.body);
            res.status = r.status;
            res.set_content(r.body.dump(), "application/json");
        };
    };
    impl_->server.Get(".*", bridge("GET"));
    impl_->server.Post(".*", bridge("POST"));
    impl_->server.Put(".*", bridge("PUT"));
    impl_->server.Delete(".*", bridge("DELETE"));
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void run_http_server(Service& service, const std::string& host, int port) {
    HttpServer server(service);
    server.bind(host, port);
    server.run();
}

}  // namespace psl
