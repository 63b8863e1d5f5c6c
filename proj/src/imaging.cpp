#include "psl/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace psl {

namespace {

// D65 reference white, sRGB primaries.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    if (t > delta * delta * delta) return std::cbrt(t);
    return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

Lab srgb_to_lab(double r, double g, double b) {
    const double rl = srgb_to_linear(r / 255.0);
    const double gl = srgb_to_linear(g / 255.0);
    const double bl = srgb_to_linear(b / 255.0);

    const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;

    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Hsv rgb_to_hsv(double r, double g, double b) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    Hsv out;
    out.v = mx;
    out.s = mx > 0.0 ? delta / mx : 0.0;
    if (delta <= 0.0) return out;
    double h;
    if (mx == r) {
        h = (g - b) / delta;
        if (h < 0.0) h += 6.0;
    } else if (mx == g) {
        h = (b - r) / delta + 2.0;
    } else {
        h = (r - g) / delta + 4.0;
    }
    out.h = h / 6.0;
    if (out.h >= 1.0) out.h -= 1.0;
    return out;
}

LabImage rgb_to_lab(const RasterImage& img) {
    LabImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const Lab lab = srgb_to_lab(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
            out.L(x, y) = lab.L;
            out.a(x, y) = lab.a;
            out.b(x, y) = lab.b;
        }
    }
    return out;
}

GrayImage luminance(const RasterImage& img) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out(x, y) = (img.at(x, y, 0) + img.at(x, y, 1) + img.at(x, y, 2)) / 3.0;
    return out;
}

RasterImage resize_bilinear(const RasterImage& img, int width, int height) {
    if (img.empty() || img.width() < 1 || img.height() < 1) throw InvalidInput("resize: empty image");
    if (width < 1 || height < 1) throw InvalidInput("resize: target size must be positive");

    RasterImage out(width, height);
    const double sx = static_cast<double>(img.width()) / width;
    const double sy = static_cast<double>(img.height()) / height;
    for (int y = 0; y < height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height() - 1));
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width() - 1));
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double wx = fx - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = img.at(x0, y0, c) * (1.0 - wx) + img.at(x1, y0, c) * wx;
                const double bottom = img.at(x0, y1, c) * (1.0 - wx) + img.at(x1, y1, c) * wx;
                out.at(x, y, c) = top * (1.0 - wy) + bottom * wy;
            }
        }
    }
    return out;
}

RasterImage resize_standard(const RasterImage& img) {
    if (img.empty() || img.width() < 2 || img.height() < 2)
        throw InvalidInput("resize_standard: image must be at least 2x2");
    RasterImage out = (img.width() == kStandardWidth && img.height() == kStandardHeight)
                          ? img
                          : resize_bilinear(img, kStandardWidth, kStandardHeight);
    out.set_original_size(img.width(), img.height());
    return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int width, int height) {
    if (mask.empty()) throw InvalidInput("resize_nearest: empty mask");
    if (width < 1 || height < 1) throw InvalidInput("resize_nearest: target size must be positive");
    if (mask.width() == width && mask.height() == height) return mask;
    BinaryMask out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(mask.height() - 1,
                                static_cast<int>(std::floor((y + 0.5) * mask.height() / static_cast<double>(height))));
        for (int x = 0; x < width; ++x) {
            const int sx = std::min(mask.width() - 1,
                                    static_cast<int>(std::floor((x + 0.5) * mask.width() / static_cast<double>(width))));
            out(x, y) = mask(sx, sy);
        }
    }
    return out;
}

OtsuResult otsu_threshold(std::span<const double> levels) {
    std::array<double, 256> hist{};
    for (double v : levels) {
        const int bin = static_cast<int>(std::clamp(std::lround(v), 0L, 255L));
        hist[static_cast<std::size_t>(bin)] += 1.0;
    }
    const double total = static_cast<double>(levels.size());
    int lo = 256, hi = -1;
    for (int i = 0; i < 256; ++i) {
        if (hist[static_cast<std::size_t>(i)] > 0) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (hi < 0) return {0, true};
    if (lo == hi) return {lo, true};

    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += i * hist[static_cast<std::size_t>(i)];

    double w0 = 0.0, sum0 = 0.0, best = -1.0;
    int best_t = lo;
    for (int t = lo; t < hi; ++t) {
        w0 += hist[static_cast<std::size_t>(t)];
        sum0 += t * hist[static_cast<std::size_t>(t)];
        const double w1 = total - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return {best_t, false};
}

OtsuResult otsu_threshold(const GrayImage& img) {
    return otsu_threshold(std::span<const double>(img.values()));
}

GrayImage median_filter(const GrayImage& img, int radius) {
    GrayImage out(img.width(), img.height());
    const int side = 2 * radius + 1;
    std::vector<double> window(static_cast<std::size_t>(side * side));
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::size_t k = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) window[k++] = img.clamped(x + dx, y + dy);
            std::nth_element(window.begin(), mid, window.end());
            out(x, y) = *mid;
        }
    }
    return out;
}

LabImage median_filter(const LabImage& img, int radius) {
    LabImage out;
    out.L = median_filter(img.L, radius);
    out.a = median_filter(img.a, radius);
    out.b = median_filter(img.b, radius);
    return out;
}

GrayImage filter2d(const GrayImage& img, std::span<const double> kernel, int size) {
    if (size % 2 == 0 || kernel.size() != static_cast<std::size_t>(size * size))
        throw InvalidInput("filter2d: kernel must be square with odd size");
    const int r = size / 2;
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < size; ++ky)
                for (int kx = 0; kx < size; ++kx)
                    acc += kernel[static_cast<std::size_t>(ky * size + kx)] * img.clamped(x + kx - r, y + ky - r);
            out(x, y) = acc;
        }
    }
    return out;
}

double Gradient::magnitude() const { return std::sqrt(gx * gx + gy * gy); }

Gradient sobel_at(const GrayImage& img, int x, int y) {
    auto p = [&](int dx, int dy) { return img.clamped(x + dx, y + dy); };
    Gradient g;
    g.gx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
    g.gy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
    return g;
}

}  // namespace psl
