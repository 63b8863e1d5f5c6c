#pragma once

#include <string>
#include <vector>

#include "psl/image.hpp"

namespace psl {

struct Pixel {
    int x = 0;
    int y = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Collects non-fatal conditions (degenerate inputs, replaced values).
struct Diagnostics {
    std::vector<std::string> messages;
    void flag(std::string message) { messages.push_back(std::move(message)); }
};

inline void flag(Diagnostics* diag, std::string message) {
    if (diag != nullptr) diag->flag(std::move(message));
}

struct Moments {
    double area = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double mu20 = 0.0;  // central second moments, normalised by area
    double mu02 = 0.0;
    double mu11 = 0.0;

    /// Angle of the principal (major) axis, radians, image coordinates (y down).
    double major_axis_angle() const;
};

Moments mask_moments(const BinaryMask& mask);

/// Foreground pixels with at least one 4-neighbour in the background or
/// outside the image. Raster order.
std::vector<Pixel> boundary_pixels(const BinaryMask& mask);

/// Moore-neighbour trace of the outer contour of the 8-connected object
/// containing the leftmost-topmost foreground pixel, clockwise on screen.
/// The start pixel is not repeated at the end.
std::vector<Pixel> trace_outer_contour(const BinaryMask& mask);

/// Outer contours of every 8-connected component.
std::vector<std::vector<Pixel>> outer_contours(const BinaryMask& mask);

/// Length of a closed 8-connected chain: 1 per axial step, sqrt(2) per diagonal.
double contour_length(const std::vector<Pixel>& contour);

/// Mask rotated so its major axis is horizontal, centroid moved to the
/// canvas centre. Canvas is square with an even side, so the centre sits at
/// (side/2 - 0.5, side/2 - 0.5) and mirroring u -> side-1-u is exact.
struct AlignedMask {
    BinaryMask mask;
    double angle = 0.0;  // principal axis angle of the source mask
};

AlignedMask align_major_axis(const BinaryMask& mask);

/// Bilinear sample of a 0/1 mask, zero outside.
double sample_mask_bilinear(const BinaryMask& mask, double x, double y);

/// Convex hull (counter-clockwise in x-right/y-up terms, collinear points dropped).
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Pixels whose centres lie inside or on the hull polygon.
std::size_t count_pixels_in_hull(const std::vector<Point2>& hull);

}  // namespace psl
