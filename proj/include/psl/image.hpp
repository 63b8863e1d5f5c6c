#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace psl {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Row-major single-plane grid. x is the column, y the row.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(check_dim(width)) * static_cast<std::size_t>(check_dim(height)), fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    // Clamped access (edge replication).
    const T& clamped(int x, int y) const {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return data_[index(x, y)];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    bool same_shape(const Grid& other) const { return width_ == other.width_ && height_ == other.height_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static int check_dim(int v) {
        if (v < 0) throw InvalidInput("grid dimension must be non-negative");
        return v;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Scalar image. Value domain is set by the producer ([0,255] luminance or [0,1]).
using GrayImage = Grid<double>;

/// Per-pixel boolean stored as 0/1 bytes; 1 = lesion.
using BinaryMask = Grid<std::uint8_t>;

std::size_t count_foreground(const BinaryMask& mask);

/// Interleaved sRGB image with samples in [0,255]. Samples are kept as
/// doubles so intermediate stages (inpainting, colour constancy) do not
/// quantize.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return samples_.empty(); }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }

    int original_width() const { return original_width_; }
    int original_height() const { return original_height_; }
    void set_original_size(int w, int h) {
        original_width_ = w;
        original_height_ = h;
    }

    double& at(int x, int y, int c) { return samples_[offset(x, y) + static_cast<std::size_t>(c)]; }
    double at(int x, int y, int c) const { return samples_[offset(x, y) + static_cast<std::size_t>(c)]; }

    void set_pixel(int x, int y, double r, double g, double b) {
        auto o = offset(x, y);
        samples_[o] = r;
        samples_[o + 1] = g;
        samples_[o + 2] = b;
    }

    std::vector<double>& samples() { return samples_; }
    const std::vector<double>& samples() const { return samples_; }

    bool same_shape(const RasterImage& other) const { return width_ == other.width_ && height_ == other.height_; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    int original_width_ = 0;
    int original_height_ = 0;
    std::vector<double> samples_;
};

/// CIE L*a*b* planes. L in [0,100].
struct LabImage {
    GrayImage L;
    GrayImage a;
    GrayImage b;

    LabImage() = default;
    LabImage(int width, int height) : L(width, height), a(width, height), b(width, height) {}

    int width() const { return L.width(); }
    int height() const { return L.height(); }

    friend bool operator==(const LabImage&, const LabImage&) = default;
};

}  // namespace psl
