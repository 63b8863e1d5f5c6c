#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "psl/geometry.hpp"
#include "psl/image.hpp"

namespace psl {

inline constexpr std::size_t kFeatureCount = 59;

/// Value used for A4/A5 when a half holds no lesion pixel (three fully
/// disjoint channel histograms).
inline constexpr double kDisjointHistogramDistance = 6.0;
inline constexpr double kVariegationFloor = 1e-9;

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::vector<std::string> flags;

    /// A1..A5, B1..B7, C1..C24, T1..T23.
    static const std::array<std::string, kFeatureCount>& names();
    static std::size_t index_of(std::string_view name);

    double operator[](std::size_t i) const { return values[i]; }
    double at(std::string_view name) const { return values[index_of(name)]; }
};

/// A1 (centroid point reflection), A2 (left/right), A3 (top/bottom).
std::array<double, 3> shape_asymmetry(const BinaryMask& mask, Diagnostics* diag = nullptr);

/// A4 (left/right), A5 (top/bottom) chi-square distances of RGB histograms.
std::array<double, 2> color_asymmetry(const RasterImage& img, const BinaryMask& mask, Diagnostics* diag = nullptr);

/// Chi-square distance of two normalised histograms; empty bin pairs contribute 0.
double chi_square_distance(const std::vector<double>& h1, const std::vector<double>& h2);

/// B1 (compactness), B3 (radial variance), B6 (solidity).
std::array<double, 3> border_geometry(const BinaryMask& mask, Diagnostics* diag = nullptr);

inline constexpr std::array<int, 6> kBoxSizes{2, 4, 8, 16, 32, 64};

/// Box count of the given pixels on a grid of side r anchored at the origin.
std::size_t count_boxes(const std::vector<Pixel>& pixels, int r);

/// B2: box-counting dimension of the boundary pixels.
double fractal_dimension(const BinaryMask& mask, Diagnostics* diag = nullptr);
double fractal_dimension(const std::vector<Pixel>& contour, Diagnostics* diag = nullptr);

/// B4, B5: mean and variance of the Sobel magnitude of (R+G+B)/3 over boundary pixels.
std::array<double, 2> pigmentation_transition(const RasterImage& img, const BinaryMask& mask);

/// Extremum count of a closed borderline function after circular moving-average smoothing.
int count_stationary_points(const std::vector<double>& f, int window);

/// Smoothing width for a contour of the given length.
int jaworek_window(std::size_t contour_length);

/// B7.
double jaworek_irregularity(const BinaryMask& mask, Diagnostics* diag = nullptr);

/// C1..C18: (mean, variance, third central moment) per channel R, G, B, H, S, V.
std::array<double, 18> histogram_color_stats(const RasterImage& img, const BinaryMask& mask);

/// C19..C24: ln(variance / mean) per channel R, G, B, H, S, V.
std::array<double, 6> color_variegation(const RasterImage& img, const BinaryMask& mask, Diagnostics* diag = nullptr);

/// The image is the colour-normalised raster the mask was drawn on.
FeatureVector extract_feature_vector(const RasterImage& img, const BinaryMask& mask);

/// Header row of feature names (preceded by `id`), one row per vector.
void write_feature_csv_header(std::ostream& os);
void write_feature_csv_row(std::ostream& os, const std::string& id, const FeatureVector& fv);

/// Shortest round-trip decimal text, independent of the global locale.
std::string format_number(double v);

}  // namespace psl
