#include "psl/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "json.hpp"
#include "psl/imaging.hpp"
#include "psl/morphology.hpp"
#include "psl/simd/kernels.hpp"

namespace psl {

std::size_t SeedSet::foreground_count() const {
    return static_cast<std::size_t>(
        std::count_if(seeds.begin(), seeds.end(), [](const Seed& s) { return s.label == SeedLabel::Foreground; }));
}

std::size_t SeedSet::background_count() const { return seeds.size() - foreground_count(); }

void SeedSet::validate(int width, int height) const {
    if (foreground_count() == 0 || background_count() == 0)
        throw InvalidInput("at least one foreground and one background seed are required");
    std::map<std::pair<int, int>, SeedLabel> seen;
    for (const Seed& s : seeds) {
        if (s.x < 0 || s.y < 0 || s.x >= width || s.y >= height)
            throw InvalidInput("seed (" + std::to_string(s.x) + "," + std::to_string(s.y) + ") is outside the " +
                               std::to_string(width) + "x" + std::to_string(height) + " image");
        auto [it, inserted] = seen.emplace(std::make_pair(s.x, s.y), s.label);
        if (!inserted && it->second != s.label)
            throw InvalidInput("seed (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                               ") is labelled both foreground and background");
    }
}

SeedSet seeds_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("seeds: ") + e.what());
    }
    if (!doc.is_array()) throw InvalidInput("seeds: expected a JSON array");
    SeedSet out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        if (!item.is_object() || !item.contains("x") || !item.contains("y") || !item.contains("label") ||
            !item["x"].is_number_integer() || !item["y"].is_number_integer() || !item["label"].is_string())
            throw InvalidInput("seeds[" + std::to_string(i) + "]: expected {\"x\":int,\"y\":int,\"label\":\"fg\"|\"bg\"}");
        const std::string label = item["label"].get<std::string>();
        if (label != "fg" && label != "bg")
            throw InvalidInput("seeds[" + std::to_string(i) + "]: label must be \"fg\" or \"bg\"");
        out.seeds.push_back({item["x"].get<int>(), item["y"].get<int>(),
                             label == "fg" ? SeedLabel::Foreground : SeedLabel::Background});
    }
    return out;
}

std::string seeds_to_json(const SeedSet& seeds) {
    nlohmann::json doc = nlohmann::json::array();
    for (const Seed& s : seeds.seeds)
        doc.push_back({{"x", s.x}, {"y", s.y}, {"label", s.label == SeedLabel::Foreground ? "fg" : "bg"}});
    return doc.dump();
}

BinaryMask isnn_label_pixels(const LabImage& img, const SeedSet& seeds, const SegmentationParams& params) {
    if (params.m < 0.0 || !std::isfinite(params.m)) throw InvalidInput("compactness m must be finite and >= 0");
    seeds.validate(img.width(), img.height());

    const double diagonal = std::sqrt(static_cast<double>(img.height()) * img.height() +
                                      static_cast<double>(img.width()) * img.width());
    const double weight = params.m / diagonal;

    std::vector<simd::SeedPoint> points;
    points.reserve(seeds.seeds.size());
    for (const Seed& s : seeds.seeds)
        points.push_back({img.L(s.x, s.y), img.a(s.x, s.y), img.b(s.x, s.y), static_cast<double>(s.x),
                          static_cast<double>(s.y)});

    std::vector<std::int32_t> nearest(img.L.size());
    simd::nearest_seed(img.L.data(), img.a.data(), img.b.data(), img.width(), img.height(), points, weight, nearest);

    BinaryMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < nearest.size(); ++i)
        mask.values()[i] = seeds.seeds[static_cast<std::size_t>(nearest[i])].label == SeedLabel::Foreground ? 1 : 0;
    for (const Seed& s : seeds.seeds) mask(s.x, s.y) = s.label == SeedLabel::Foreground ? 1 : 0;
    return mask;
}

BinaryMask refine_mask(const BinaryMask& mask, const SeedSet& seeds) {
    seeds.validate(mask.width(), mask.height());
    const ComponentLabels comps = label_components(mask, Connectivity::Eight);
    std::vector<bool> keep(static_cast<std::size_t>(comps.count) + 1, false);
    for (const Seed& s : seeds.seeds)
        if (s.label == SeedLabel::Foreground) keep[static_cast<std::size_t>(comps.labels(s.x, s.y))] = true;
    keep[0] = false;

    BinaryMask kept(mask.width(), mask.height());
    bool any = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const bool on = keep[static_cast<std::size_t>(comps.labels.values()[i])];
        kept.values()[i] = on ? 1 : 0;
        any = any || on;
    }
    if (!any) throw SegmentationError("no foreground object contains a foreground seed; seeds are contradictory");
    return fill_holes(dilate_cross(kept));
}

SegmentationResult segment_detailed(const RasterImage& img, const SeedSet& seeds, double m) {
    SegmentationResult result;
    result.standardized = resize_standard(img);
    seeds.validate(result.standardized.width(), result.standardized.height());
    result.preprocessed = preprocess(result.standardized);
    result.raw = isnn_label_pixels(result.preprocessed.lab, seeds, {m});
    result.mask = refine_mask(result.raw, seeds);
    return result;
}

BinaryMask segment(const RasterImage& img, const SeedSet& seeds, double m) {
    return segment_detailed(img, seeds, m).mask;
}

}  // namespace psl
