#pragma once

#include <array>
#include <vector>

#include "psl/geometry.hpp"
#include "psl/image.hpp"

namespace psl {

inline constexpr int kTextureLevels = 8;

/// Gray levels 0..levels-1 inside the mask, -1 outside.
struct QuantizedLesion {
    Grid<int> levels;
    int level_count = kTextureLevels;
};

/// Uniform quantization over the lesion's own min-max range. A flat lesion
/// maps entirely to level 0.
QuantizedLesion quantize_lesion(const GrayImage& gray, const BinaryMask& mask, int levels = kTextureLevels);
QuantizedLesion quantize_lesion(const RasterImage& img, const BinaryMask& mask, int levels = kTextureLevels);

struct Offset {
    int dx = 0;
    int dy = 0;
};

/// d=1 displacements for 0, 45, 90 and 135 degrees (y grows downwards).
inline constexpr std::array<Offset, 4> kTextureOffsets{{{1, 0}, {1, -1}, {0, -1}, {-1, -1}}};

struct GlcmMatrix {
    int levels = 0;
    std::vector<double> p;  // row-major levels x levels, sums to 1 unless empty
    double pairs = 0.0;     // symmetric pair count before normalisation

    double operator()(int i, int j) const { return p[static_cast<std::size_t>(i * levels + j)]; }
    bool empty() const { return pairs == 0.0; }
};

/// Symmetric normalised co-occurrence matrix; pairs count only when both
/// pixels are inside the lesion.
GlcmMatrix glcm_matrix(const QuantizedLesion& q, Offset offset);

struct GlcmStats {
    double contrast = 0.0;
    double correlation = 0.0;
    double energy = 1.0;
    double homogeneity = 1.0;
};

/// Level k is valued k/(levels-1) so the statistics do not depend on the level count.
GlcmStats glcm_stats(const GlcmMatrix& m);

/// T1..T16: (contrast, correlation, energy, homogeneity) for 0, 45, 90, 135 degrees.
std::array<double, 16> glcm_features(const QuantizedLesion& q, Diagnostics* diag = nullptr);
std::array<double, 16> glcm_features(const RasterImage& img, const BinaryMask& mask, Diagnostics* diag = nullptr);

struct GlrlmMatrix {
    int levels = 0;
    int max_run = 0;
    std::vector<double> counts;  // row-major levels x max_run; column j holds runs of length j+1

    double operator()(int level, int run_length) const {
        return counts[static_cast<std::size_t>(level * max_run + run_length - 1)];
    }
    double runs() const;
    double run_pixels() const;
};

/// Runs along one direction; runs stop at the mask edge.
GlrlmMatrix glrlm_matrix(const QuantizedLesion& q, Offset direction);

/// Element-wise sum of the four directional matrices.
GlrlmMatrix glrlm_summed(const QuantizedLesion& q);

struct GlrlmStats {
    double sre = 0.0;
    double lre = 0.0;
    double gln = 0.0;
    double rln = 0.0;
    double rp = 0.0;
    double lgre = 0.0;
    double hgre = 0.0;
};

/// Gray-level index i starts at 1. RP divides the run count by the number
/// of pixels the matrix covers (4x the lesion size for the summed matrix).
GlrlmStats glrlm_stats(const GlrlmMatrix& m);

/// T17..T23: SRE, LRE, GLN, RLN, RP, LGRE, HGRE of the summed matrix.
std::array<double, 7> glrlm_features(const QuantizedLesion& q);
std::array<double, 7> glrlm_features(const RasterImage& img, const BinaryMask& mask);

}  // namespace psl
