#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "psl/dataset.hpp"
#include "psl/model_io.hpp"
#include "psl/segmentation.hpp"

namespace psl {

struct CatalogImage {
    std::string id;
    std::filesystem::path path;
    std::filesystem::path mask;  // ground truth, optional
    std::optional<std::string> label;
};

/// Images the service can open sessions on.
class ImageCatalog {
public:
    void add(CatalogImage image);
    static ImageCatalog from_manifest(const DatasetManifest& manifest);
    /// Every .png/.jpg/.jpeg file in the directory, ids are file names.
    static ImageCatalog from_directory(const std::filesystem::path& dir);

    const std::vector<CatalogImage>& images() const { return images_; }
    const CatalogImage* find(const std::string& id) const;

private:
    std::vector<CatalogImage> images_;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// HTTP-independent request handling. Each session is guarded by its own
/// mutex; the model is read-only once loaded.
class Service {
public:
    explicit Service(ImageCatalog catalog, std::optional<ModelFile> model = std::nullopt);

    ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

    ApiResponse list_images() const;
    ApiResponse get_image(const std::string& id) const;
    ApiResponse create_session(const std::string& body);
    ApiResponse get_session(const std::string& id);
    ApiResponse post_seeds(const std::string& id, const std::string& body);
    ApiResponse classify(const std::string& id, const std::string& body);

private:
    struct Session {
        std::mutex mutex;
        std::string id;
        std::string image_id;
        RasterImage standardized;
        Preprocessed preprocessed;
        std::optional<BinaryMask> truth;
        SeedSet seeds;
        double m = kDefaultCompactness;
        std::optional<BinaryMask> mask;
        std::optional<nlohmann::json> diagnosis;
    };

    std::shared_ptr<Session> find_session(const std::string& id);
    nlohmann::json session_json(const Session& s) const;

    ImageCatalog catalog_;
    std::optional<ModelFile> model_;
    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::atomic<std::uint64_t> next_id_{1};
};

/// HTTP front end over a Service.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Blocks serving the API until the process is stopped.
void run_http_server(Service& service, const std::string& host, int port);

}  // namespace psl
