#pragma once

#include <array>
#include <span>

#include "psl/image.hpp"

namespace psl {

inline constexpr int kStandardWidth = 300;
inline constexpr int kStandardHeight = 225;

struct Lab {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct Hsv {
    double h = 0.0;  // hue as a fraction of a full turn, [0,1)
    double s = 0.0;
    double v = 0.0;
};

/// sRGB (0..255) -> linear -> XYZ (D65) -> L*a*b*.
Lab srgb_to_lab(double r, double g, double b);

/// RGB in [0,1] -> HSV with all components in [0,1].
Hsv rgb_to_hsv(double r, double g, double b);

LabImage rgb_to_lab(const RasterImage& img);

/// (R+G+B)/3, in the raster's [0,255] scale.
GrayImage luminance(const RasterImage& img);

/// Bilinear (half-pixel centres, edge clamped) resample to 300x225.
/// Records the input size as the original size of the result.
RasterImage resize_standard(const RasterImage& img);
RasterImage resize_bilinear(const RasterImage& img, int width, int height);

/// Nearest-neighbour resample, used to move masks between the standard
/// grid and the original image size.
BinaryMask resize_nearest(const BinaryMask& mask, int width, int height);

struct OtsuResult {
    int threshold = 0;       // pixels with level <= threshold form the low class
    bool degenerate = false; // fewer than two distinct levels
};

/// Otsu on a 256-bin histogram. Values are rounded and clamped to 0..255.
OtsuResult otsu_threshold(const GrayImage& img);
OtsuResult otsu_threshold(std::span<const double> levels);

/// Median over a (2*radius+1)^2 window with edge replication.
GrayImage median_filter(const GrayImage& img, int radius = 2);
LabImage median_filter(const LabImage& img, int radius = 2);

/// 2-D correlation with a square odd-sized kernel, edge replication.
GrayImage filter2d(const GrayImage& img, std::span<const double> kernel, int size);

struct Gradient {
    double gx = 0.0;
    double gy = 0.0;
    double magnitude() const;
};

/// 3x3 Sobel response at one pixel, edge replication.
Gradient sobel_at(const GrayImage& img, int x, int y);

}  // namespace psl
