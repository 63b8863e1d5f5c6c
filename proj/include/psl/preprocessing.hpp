#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "psl/image.hpp"

namespace psl {

/// z(x,y) = P1 x^2 + P2 y^2 + P3 xy + P4 x + P5 y + P6, x = column, y = row.
struct IlluminationModel {
    std::array<double, 6> coefficients{};
    double mean_z = 0.0;
    bool constant_fallback = false;  // fit was underdetermined

    double operator()(double x, double y) const {
        const auto& p = coefficients;
        return p[0] * x * x + p[1] * y * y + p[2] * x * y + p[3] * x + p[4] * y + p[5];
    }
};

using HairMask = BinaryMask;

struct HairRemovalParams {
    double threshold = 0.3;   // on the LoG response of [0,1] luminance
    int kernel_size = 5;
    double sigma = 0.5;
    int window = 11;          // inpainting neighbourhood, grown by 2 when empty
};

struct HairRemovalResult {
    RasterImage image;
    HairMask mask;
    std::vector<std::string> warnings;
};

/// Discrete 5x5 Laplacian-of-Gaussian kernel (zero-sum), row-major.
std::vector<double> log_kernel(int size, double sigma);

HairMask detect_hair(const RasterImage& img, const HairRemovalParams& params = {});
HairRemovalResult remove_hair_detailed(const RasterImage& img, const HairRemovalParams& params = {});
RasterImage remove_hair(const RasterImage& img, const HairRemovalParams& params = {});

/// Least-squares quadratic fit of L over the given pixels (x, y) with values.
IlluminationModel fit_illumination(std::span<const int> xs, std::span<const int> ys, std::span<const double> values,
                                   int width, int height);

/// Skin set S from Otsu on L (higher-mean class), as a mask.
BinaryMask skin_pixels(const LabImage& img);

struct IlluminationResult {
    LabImage image;
    IlluminationModel model;
    BinaryMask skin;
};

IlluminationResult correct_illumination_detailed(const LabImage& img);
LabImage correct_illumination(const LabImage& img);

/// Minkowski p-norm colour constancy.
RasterImage shades_of_gray(const RasterImage& img, double p = 6.0);

struct Preprocessed {
    LabImage lab;          // for segmentation
    RasterImage colour;    // hair-free, colour-normalised, for features
};

Preprocessed preprocess(const RasterImage& img);

}  // namespace psl
