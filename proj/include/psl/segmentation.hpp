#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "psl/image.hpp"
#include "psl/preprocessing.hpp"

namespace psl {

class SegmentationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SeedLabel : std::uint8_t { Background = 0, Foreground = 1 };

struct Seed {
    int x = 0;
    int y = 0;
    SeedLabel label = SeedLabel::Foreground;

    friend bool operator==(const Seed&, const Seed&) = default;
};

/// User-labelled pixels, in the coordinates of the image being segmented.
struct SeedSet {
    std::vector<Seed> seeds;

    std::size_t foreground_count() const;
    std::size_t background_count() const;

    /// Throws InvalidInput unless there is at least one seed of each label,
    /// all seeds lie inside width x height, and no pixel carries both labels.
    void validate(int width, int height) const;

    friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

/// Parses [{"x":int,"y":int,"label":"fg"|"bg"}, ...].
SeedSet seeds_from_json(const std::string& text);
std::string seeds_to_json(const SeedSet& seeds);

inline constexpr double kDefaultCompactness = 0.1;

struct SegmentationParams {
    double m = kDefaultCompactness;  // spatial weight; S is the image diagonal
};

/// Nearest-seed labelling under D = d_lab + (m/S) d_xy. Seed pixels keep
/// their own label.
BinaryMask isnn_label_pixels(const LabImage& img, const SeedSet& seeds, const SegmentationParams& params = {});

/// Drops unseeded 8-connected objects, dilates once with the 3x3 cross,
/// then fills holes. Throws SegmentationError if no seeded object survives.
BinaryMask refine_mask(const BinaryMask& mask, const SeedSet& seeds);

struct SegmentationResult {
    BinaryMask mask;      // 300x225
    BinaryMask raw;       // labelling before refinement
    Preprocessed preprocessed;
    RasterImage standardized;
};

SegmentationResult segment_detailed(const RasterImage& img, const SeedSet& seeds, double m = kDefaultCompactness);

/// Full pipeline: standardize -> preprocess -> label -> refine. Seeds are in
/// 300x225 coordinates; the returned mask is 300x225.
BinaryMask segment(const RasterImage& img, const SeedSet& seeds, double m = kDefaultCompactness);

}  // namespace psl
