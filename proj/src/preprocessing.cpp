#include "psl/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "psl/imaging.hpp"

namespace psl {

std::vector<double> log_kernel(int size, double sigma) {
    if (size < 1 || size % 2 == 0) throw InvalidInput("log_kernel: size must be odd and positive");
    const int r = size / 2;
    const double var = sigma * sigma;
    std::vector<double> g(static_cast<std::size_t>(size * size));
    double gmax = 0.0;
    for (int y = -r; y <= r; ++y)
        for (int x = -r; x <= r; ++x) {
            const double v = std::exp(-(x * x + y * y) / (2.0 * var));
            g[static_cast<std::size_t>((y + r) * size + (x + r))] = v;
            gmax = std::max(gmax, v);
        }
    double gsum = 0.0;
    for (double& v : g) {
        if (v < std::numeric_limits<double>::epsilon() * gmax) v = 0.0;
        gsum += v;
    }
    std::vector<double> h(g.size());
    double hsum = 0.0;
    for (int y = -r; y <= r; ++y)
        for (int x = -r; x <= r; ++x) {
            const auto i = static_cast<std::size_t>((y + r) * size + (x + r));
            h[i] = (g[i] / gsum) * (x * x + y * y - 2.0 * var) / (var * var);
            hsum += h[i];
        }
    const double mean = hsum / static_cast<double>(h.size());
    for (double& v : h) v -= mean;
    return h;
}

HairMask detect_hair(const RasterImage& img, const HairRemovalParams& params) {
    GrayImage lum = luminance(img);
    for (double& v : lum.values()) v /= 255.0;
    const auto kernel = log_kernel(params.kernel_size, params.sigma);
    const GrayImage response = filter2d(lum, kernel, params.kernel_size);
    HairMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < mask.size(); ++i) mask.values()[i] = response.values()[i] > params.threshold ? 1 : 0;
    return mask;
}

HairRemovalResult remove_hair_detailed(const RasterImage& img, const HairRemovalParams& params) {
    HairRemovalResult result{img, detect_hair(img, params), {}};
    const HairMask& mask = result.mask;
    const std::size_t masked = count_foreground(mask);
    if (masked == 0) return result;
    if (masked == mask.size()) {
        result.warnings.emplace_back("hair mask covers the whole image; left unchanged");
        return result;
    }

    const int w = img.width();
    const int h = img.height();
    const int max_radius = std::max(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask(x, y)) continue;
            for (int radius = params.window / 2;; radius += 1) {
                double sum[3] = {0.0, 0.0, 0.0};
                std::size_t n = 0;
                const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
                const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
                for (int yy = y0; yy <= y1; ++yy)
                    for (int xx = x0; xx <= x1; ++xx) {
                        if (mask(xx, yy)) continue;
                        for (int c = 0; c < 3; ++c) sum[c] += img.at(xx, yy, c);
                        ++n;
                    }
                if (n > 0) {
                    for (int c = 0; c < 3; ++c) result.image.at(x, y, c) = sum[c] / static_cast<double>(n);
                    break;
                }
                if (radius > max_radius) break;  // unreachable: some pixel is unmasked
            }
        }
    }
    return result;
}

RasterImage remove_hair(const RasterImage& img, const HairRemovalParams& params) {
    return remove_hair_detailed(img, params).image;
}

IlluminationModel fit_illumination(std::span<const int> xs, std::span<const int> ys, std::span<const double> values,
                                   int width, int height) {
    if (xs.size() != ys.size() || xs.size() != values.size())
        throw InvalidInput("fit_illumination: coordinate/value size mismatch");
    IlluminationModel model;
    const std::size_t n = values.size();

    double mean_value = 0.0;
    for (double v : values) mean_value += v;
    mean_value = n > 0 ? mean_value / static_cast<double>(n) : 0.0;

    bool solved = false;
    if (n >= 6) {
        // Centred, scaled coordinates keep the 6-column system well conditioned.
        const double cx = (width - 1) / 2.0;
        const double cy = (height - 1) / 2.0;
        const double s = std::max(1.0, std::max(width, height) / 2.0);
        Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 6);
        Eigen::VectorXd z(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) {
            const double u = (xs[j] - cx) / s;
            const double v = (ys[j] - cy) / s;
            const auto r = static_cast<Eigen::Index>(j);
            A(r, 0) = u * u;
            A(r, 1) = v * v;
            A(r, 2) = u * v;
            A(r, 3) = u;
            A(r, 4) = v;
            A(r, 5) = 1.0;
            z(r) = values[j];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-10);
        if (qr.rank() == 6) {
            const Eigen::VectorXd q = qr.solve(z);
            const double s2 = s * s;
            auto& p = model.coefficients;
            p[0] = q(0) / s2;
            p[1] = q(1) / s2;
            p[2] = q(2) / s2;
            p[3] = (-2.0 * cx * q(0) - cy * q(2)) / s2 + q(3) / s;
            p[4] = (-2.0 * cy * q(1) - cx * q(2)) / s2 + q(4) / s;
            p[5] = (q(0) * cx * cx + q(1) * cy * cy + q(2) * cx * cy) / s2 - (q(3) * cx + q(4) * cy) / s + q(5);
            solved = std::all_of(p.begin(), p.end(), [](double c) { return std::isfinite(c); });
        }
    }
    if (!solved) {
        model.coefficients = {0.0, 0.0, 0.0, 0.0, 0.0, mean_value};
        model.constant_fallback = true;
    }

    double total = 0.0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) total += model(x, y);
    model.mean_z = width > 0 && height > 0 ? total / (static_cast<double>(width) * height) : 0.0;
    return model;
}

BinaryMask skin_pixels(const LabImage& img) {
    GrayImage levels(img.width(), img.height());
    for (std::size_t i = 0; i < levels.size(); ++i) levels.values()[i] = img.L.values()[i] * 2.55;
    const OtsuResult otsu = otsu_threshold(levels);
    BinaryMask skin(img.width(), img.height(), 1);
    if (otsu.degenerate) return skin;
    for (std::size_t i = 0; i < skin.size(); ++i) {
        const long level = std::clamp(std::lround(levels.values()[i]), 0L, 255L);
        skin.values()[i] = level > otsu.threshold ? 1 : 0;
    }
    return skin;
}

IlluminationResult correct_illumination_detailed(const LabImage& img) {
    IlluminationResult result{img, {}, skin_pixels(img)};
    std::vector<int> xs, ys;
    std::vector<double> vals;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (result.skin(x, y)) {
                xs.push_back(x);
                ys.push_back(y);
                vals.push_back(img.L(x, y));
            }
    result.model = fit_illumination(xs, ys, vals, img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            result.image.L(x, y) = std::clamp(img.L(x, y) - result.model(x, y) + result.model.mean_z, 0.0, 100.0);
    return result;
}

LabImage correct_illumination(const LabImage& img) { return correct_illumination_detailed(img).image; }

RasterImage shades_of_gray(const RasterImage& img, double p) {
    RasterImage out = img;
    if (img.empty()) return out;
    const double n = static_cast<double>(img.pixel_count());
    double norm[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < img.pixel_count(); ++i) acc += std::pow(img.samples()[i * 3 + static_cast<std::size_t>(c)], p);
        norm[c] = std::pow(acc / n, 1.0 / p);
    }
    double target = 0.0;
    int active = 0;
    for (double e : norm)
        if (e > 0.0) {
            target += e;
            ++active;
        }
    if (active == 0) return out;
    target /= active;
    for (int c = 0; c < 3; ++c) {
        const double scale = norm[c] > 0.0 ? target / norm[c] : 1.0;
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            double& v = out.samples()[i * 3 + static_cast<std::size_t>(c)];
            v = std::clamp(v * scale, 0.0, 255.0);
        }
    }
    return out;
}

Preprocessed preprocess(const RasterImage& img) {
    const RasterImage hairless = remove_hair(img);
    LabImage lab = correct_illumination(rgb_to_lab(hairless));
    return {median_filter(lab), shades_of_gray(hairless)};
}

}  // namespace psl
