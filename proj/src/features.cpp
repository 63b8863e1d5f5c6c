#include "psl/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "psl/imaging.hpp"
#include "psl/morphology.hpp"
#include "psl/texture.hpp"

namespace psl {

namespace {

bool fg(const BinaryMask& m, int x, int y) { return m.contains(x, y) && m(x, y) != 0; }

double iou(std::size_t inter, std::size_t uni) { return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni); }

void require_same_shape(const RasterImage& img, const BinaryMask& mask) {
    if (img.width() != mask.width() || img.height() != mask.height())
        throw InvalidInput("image is " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                           " but mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
}

void require_nonempty(const BinaryMask& mask) {
    if (count_foreground(mask) == 0) throw InvalidInput("mask has no lesion pixels");
}

int to_bin(double unit) { return static_cast<int>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0)); }

// Per-channel 256-bin histograms of R, G, B, H, S, V over lesion pixels.
std::array<std::array<double, 256>, 6> channel_histograms(const RasterImage& img, const BinaryMask& mask) {
    std::array<std::array<double, 256>, 6> hist{};
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y)) continue;
            const double r = std::clamp(img.at(x, y, 0) / 255.0, 0.0, 1.0);
            const double g = std::clamp(img.at(x, y, 1) / 255.0, 0.0, 1.0);
            const double b = std::clamp(img.at(x, y, 2) / 255.0, 0.0, 1.0);
            const Hsv hsv = rgb_to_hsv(r, g, b);
            const double v[6] = {r, g, b, hsv.h, hsv.s, hsv.v};
            for (int c = 0; c < 6; ++c) hist[c][to_bin(v[c])] += 1.0;
        }
    return hist;
}

struct ChannelMoments {
    double mean = 0.0;
    double variance = 0.0;
    double skew = 0.0;
};

std::array<ChannelMoments, 6> channel_moments(const RasterImage& img, const BinaryMask& mask) {
    const auto hist = channel_histograms(img, mask);
    std::array<ChannelMoments, 6> out;
    for (int c = 0; c < 6; ++c) {
        double n = 0.0;
        for (double v : hist[c]) n += v;
        ChannelMoments& m = out[c];
        for (int i = 0; i < 256; ++i) m.mean += (i / 255.0) * hist[c][i] / n;
        for (int i = 0; i < 256; ++i) {
            const double d = i / 255.0 - m.mean;
            const double p = hist[c][i] / n;
            m.variance += d * d * p;
            m.skew += d * d * d * p;
        }
    }
    return out;
}

}  // namespace

const std::array<std::string, kFeatureCount>& FeatureVector::names() {
    static const std::array<std::string, kFeatureCount> table = [] {
        std::array<std::string, kFeatureCount> t;
        std::size_t k = 0;
        for (int i = 1; i <= 5; ++i) t[k++] = "A" + std::to_string(i);
        for (int i = 1; i <= 7; ++i) t[k++] = "B" + std::to_string(i);
        for (int i = 1; i <= 24; ++i) t[k++] = "C" + std::to_string(i);
        for (int i = 1; i <= 23; ++i) t[k++] = "T" + std::to_string(i);
        return t;
    }();
    return table;
}

std::size_t FeatureVector::index_of(std::string_view name) {
    const auto& n = names();
    for (std::size_t i = 0; i < n.size(); ++i)
        if (n[i] == name) return i;
    throw InvalidInput("unknown feature name: " + std::string(name));
}

std::array<double, 3> shape_asymmetry(const BinaryMask& mask, Diagnostics* diag) {
    require_nonempty(mask);
    const Moments m = mask_moments(mask);

    int x0 = mask.width(), x1 = -1, y0 = mask.height(), y1 = -1;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
    const int ex0 = std::min(x0, static_cast<int>(std::floor(2.0 * m.cx - x1)));
    const int ex1 = std::max(x1, static_cast<int>(std::ceil(2.0 * m.cx - x0)));
    const int ey0 = std::min(y0, static_cast<int>(std::floor(2.0 * m.cy - y1)));
    const int ey1 = std::max(y1, static_cast<int>(std::ceil(2.0 * m.cy - y0)));
    std::size_t inter = 0, uni = 0;
    for (int y = ey0; y <= ey1; ++y)
        for (int x = ex0; x <= ex1; ++x) {
            const bool a = fg(mask, x, y);
            const bool b = sample_mask_bilinear(mask, 2.0 * m.cx - x, 2.0 * m.cy - y) >= 0.5;
            inter += a && b;
            uni += a || b;
        }
    std::array<double, 3> out{iou(inter, uni), 1.0, 1.0};

    const AlignedMask al = align_major_axis(mask);
    if (count_foreground(al.mask) == 0) {
        flag(diag, "A2/A3: aligned mask is empty, symmetry assumed");
        return out;
    }
    const int n = al.mask.width();
    std::size_t inter_lr = 0, uni_lr = 0, inter_tb = 0, uni_tb = 0;
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
            const bool a = al.mask(u, v) != 0;
            const bool lr = al.mask(n - 1 - u, v) != 0;
            const bool tb = al.mask(u, n - 1 - v) != 0;
            inter_lr += a && lr;
            uni_lr += a || lr;
            inter_tb += a && tb;
            uni_tb += a || tb;
        }
    out[1] = iou(inter_lr, uni_lr);
    out[2] = iou(inter_tb, uni_tb);
    return out;
}

double chi_square_distance(const std::vector<double>& h1, const std::vector<double>& h2) {
    if (h1.size() != h2.size()) throw InvalidInput("histogram sizes differ");
    double d = 0.0;
    for (std::size_t i = 0; i < h1.size(); ++i) {
        const double s = h1[i] + h2[i];
        if (s > 0.0) d += (h1[i] - h2[i]) * (h1[i] - h2[i]) / s;
    }
    return d;
}

std::array<double, 2> color_asymmetry(const RasterImage& img, const BinaryMask& mask, Diagnostics* diag) {
    require_same_shape(img, mask);
    require_nonempty(mask);
    const Moments m = mask_moments(mask);
    const double c = std::cos(m.major_axis_angle()), s = std::sin(m.major_axis_angle());

    // halves: 0 left, 1 right, 2 top, 3 bottom; each with three channel histograms
    std::array<std::array<std::vector<double>, 3>, 4> hist;
    for (auto& half : hist)
        for (auto& h : half) h.assign(256, 0.0);
    std::array<double, 4> counts{};
    constexpr double on_cut = 1e-9;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y)) continue;
            const double dx = x - m.cx, dy = y - m.cy;
            const double vx = c * dx + s * dy;
            const double vy = -s * dx + c * dy;
            int halves[2] = {-1, -1};
            if (std::abs(vx) > on_cut) halves[0] = vx < 0 ? 0 : 1;
            if (std::abs(vy) > on_cut) halves[1] = vy < 0 ? 2 : 3;
            for (int h : halves) {
                if (h < 0) continue;
                counts[h] += 1.0;
                for (int ch = 0; ch < 3; ++ch) hist[h][ch][to_bin(img.at(x, y, ch) / 255.0)] += 1.0;
            }
        }

    std::array<double, 2> out{};
    for (int pair = 0; pair < 2; ++pair) {
        const int a = 2 * pair, b = 2 * pair + 1;
        if (counts[a] == 0.0 || counts[b] == 0.0) {
            flag(diag, std::string(pair == 0 ? "A4" : "A5") + ": a half holds no lesion pixels");
            out[pair] = kDisjointHistogramDistance;
            continue;
        }
        for (int ch = 0; ch < 3; ++ch) {
            std::vector<double> ha = hist[a][ch], hb = hist[b][ch];
            for (double& v : ha) v /= counts[a];
            for (double& v : hb) v /= counts[b];
            out[pair] += chi_square_distance(ha, hb);
        }
    }
    return out;
}

std::array<double, 3> border_geometry(const BinaryMask& mask, Diagnostics* diag) {
    require_nonempty(mask);
    const std::vector<Pixel> boundary = boundary_pixels(mask);
    if (boundary.size() < 3) {
        flag(diag, "B1/B3/B6: fewer than three boundary pixels");
        return {1.0, 0.0, 1.0};
    }
    const Moments m = mask_moments(mask);

    double perimeter = 0.0;
    for (const auto& contour : outer_contours(mask)) perimeter += contour_length(contour);
    const double b1 = perimeter * perimeter / (4.0 * std::numbers::pi * m.area);

    double mean = 0.0;
    std::vector<double> radii;
    radii.reserve(boundary.size());
    for (const Pixel& p : boundary) {
        radii.push_back(std::hypot(p.x - m.cx, p.y - m.cy));
        mean += radii.back();
    }
    mean /= static_cast<double>(radii.size());
    double var = 0.0;
    for (double r : radii) var += (r - mean) * (r - mean);
    var /= static_cast<double>(radii.size());
    const double b3 = mean > 0.0 ? var / (mean * mean) : 0.0;

    std::vector<Point2> pts;
    pts.reserve(boundary.size());
    for (const Pixel& p : boundary) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    const std::size_t hull_area = count_pixels_in_hull(convex_hull(std::move(pts)));
    const double b6 = hull_area > 0 ? std::min(1.0, m.area / static_cast<double>(hull_area)) : 1.0;
    return {b1, b3, b6};
}

std::size_t count_boxes(const std::vector<Pixel>& pixels, int r) {
    std::vector<std::pair<int, int>> boxes;
    boxes.reserve(pixels.size());
    for (const Pixel& p : pixels) boxes.emplace_back(p.x / r, p.y / r);
    std::sort(boxes.begin(), boxes.end());
    return static_cast<std::size_t>(std::unique(boxes.begin(), boxes.end()) - boxes.begin());
}

double fractal_dimension(const std::vector<Pixel>& contour, Diagnostics* diag) {
    if (count_boxes(contour, kBoxSizes.front()) < 2) {
        flag(diag, "B2: contour too small for box counting");
        return 0.0;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = kBoxSizes.size();
    for (int r : kBoxSizes) {
        const double x = std::log(1.0 / r);
        const double y = std::log(static_cast<double>(count_boxes(contour, r)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fractal_dimension(const BinaryMask& mask, Diagnostics* diag) {
    return fractal_dimension(boundary_pixels(mask), diag);
}

std::array<double, 2> pigmentation_transition(const RasterImage& img, const BinaryMask& mask) {
    require_same_shape(img, mask);
    const std::vector<Pixel> boundary = boundary_pixels(mask);
    if (boundary.empty()) return {0.0, 0.0};
    const GrayImage lum = luminance(img);
    double sum = 0.0, sum_sq = 0.0;
    for (const Pixel& p : boundary) {
        const double e = sobel_at(lum, p.x, p.y).magnitude();
        sum += e;
        sum_sq += e * e;
    }
    const double n = static_cast<double>(boundary.size());
    const double mean = sum / n;
    return {mean, std::max(0.0, sum_sq / n - mean * mean)};
}

int jaworek_window(std::size_t contour_length) {
    return std::max(5, static_cast<int>(std::lround(0.05 * static_cast<double>(contour_length))));
}

int count_stationary_points(const std::vector<double>& f, int window) {
    const int n = static_cast<int>(f.size());
    if (window < 1 || n < window || n < 2) return 0;
    std::vector<double> smooth(f.size());
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int t = 0; t < window; ++t) s += f[static_cast<std::size_t>(((k - window / 2 + t) % n + n) % n)];
        smooth[static_cast<std::size_t>(k)] = s / window;
    }
    std::vector<int> signs;
    for (int k = 0; k < n; ++k) {
        const double d = smooth[static_cast<std::size_t>((k + 1) % n)] - smooth[static_cast<std::size_t>(k)];
        if (std::abs(d) > 1e-9) signs.push_back(d > 0 ? 1 : -1);
    }
    int changes = 0;
    for (std::size_t i = 0; i < signs.size() && signs.size() > 1; ++i)
        if (signs[i] != signs[(i + 1) % signs.size()]) ++changes;
    return changes;
}

double jaworek_irregularity(const BinaryMask& mask, Diagnostics* diag) {
    require_nonempty(mask);
    const BinaryMask aligned = largest_component(align_major_axis(mask).mask);
    const std::vector<Pixel> contour = trace_outer_contour(aligned);
    if (contour.empty()) {
        flag(diag, "B7: aligned mask is empty");
        return 0.0;
    }
    int x0 = contour[0].x, x1 = x0, y0 = contour[0].y, y1 = y0;
    for (const Pixel& p : contour) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    std::vector<double> f;
    f.reserve(contour.size());
    for (const Pixel& p : contour) f.push_back(std::min({p.x - x0, x1 - p.x, p.y - y0, y1 - p.y}));
    const int window = jaworek_window(contour.size());
    if (static_cast<int>(contour.size()) < window) {
        flag(diag, "B7: contour shorter than the smoothing window");
        return 0.0;
    }
    return count_stationary_points(f, window);
}

std::array<double, 18> histogram_color_stats(const RasterImage& img, const BinaryMask& mask) {
    require_same_shape(img, mask);
    require_nonempty(mask);
    const auto moments = channel_moments(img, mask);
    std::array<double, 18> out{};
    for (int c = 0; c < 6; ++c) {
        out[3 * c] = moments[c].mean;
        out[3 * c + 1] = moments[c].variance;
        out[3 * c + 2] = moments[c].skew;
    }
    return out;
}

std::array<double, 6> color_variegation(const RasterImage& img, const BinaryMask& mask, Diagnostics* diag) {
    require_same_shape(img, mask);
    require_nonempty(mask);
    const auto moments = channel_moments(img, mask);
    static constexpr const char* kChannels[6] = {"R", "G", "B", "H", "S", "V"};
    std::array<double, 6> out{};
    for (int c = 0; c < 6; ++c) {
        double ratio = kVariegationFloor;
        if (moments[c].mean > 0.0)
            ratio = std::max(moments[c].variance / moments[c].mean, kVariegationFloor);
        else
            flag(diag, std::string("variegation: zero mean in channel ") + kChannels[c]);
        out[c] = std::log(ratio);
    }
    return out;
}

FeatureVector extract_feature_vector(const RasterImage& img, const BinaryMask& mask) {
    require_same_shape(img, mask);
    require_nonempty(mask);
    FeatureVector fv;
    Diagnostics diag;
    std::size_t k = 0;
    auto put = [&](const auto& block) {
        for (double v : block) fv.values[k++] = v;
    };
    put(shape_asymmetry(mask, &diag));
    put(color_asymmetry(img, mask, &diag));
    const auto border = border_geometry(mask, &diag);
    fv.values[k++] = border[0];
    fv.values[k++] = fractal_dimension(mask, &diag);
    fv.values[k++] = border[1];
    put(pigmentation_transition(img, mask));
    fv.values[k++] = border[2];
    fv.values[k++] = jaworek_irregularity(mask, &diag);
    put(histogram_color_stats(img, mask));
    put(color_variegation(img, mask, &diag));
    const QuantizedLesion q = quantize_lesion(img, mask);
    put(glcm_features(q, &diag));
    put(glrlm_features(q));

    for (std::size_t i = 0; i < fv.values.size(); ++i)
        if (!std::isfinite(fv.values[i])) {
            diag.flag(FeatureVector::names()[i] + ": non-finite value replaced by 0");
            fv.values[i] = 0.0;
        }
    fv.flags = std::move(diag.messages);
    return fv;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

void write_feature_csv_header(std::ostream& os) {
    os << "id";
    for (const auto& n : FeatureVector::names()) os << ',' << n;
    os << '\n';
}

void write_feature_csv_row(std::ostream& os, const std::string& id, const FeatureVector& fv) {
    os << csv_field(id);
    for (double v : fv.values) os << ',' << format_number(v);
    os << '\n';
}

}  // namespace psl
