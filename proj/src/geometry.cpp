#include "psl/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "psl/morphology.hpp"

namespace psl {

namespace {

// Clockwise on screen (y down), starting west.
constexpr int kRingDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kRingDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

int ring_index(int dx, int dy) {
    for (int k = 0; k < 8; ++k)
        if (kRingDx[k] == dx && kRingDy[k] == dy) return k;
    return -1;
}

bool fg(const BinaryMask& m, int x, int y) { return m.contains(x, y) && m(x, y) != 0; }

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double Moments::major_axis_angle() const { return 0.5 * std::atan2(2.0 * mu11, mu20 - mu02); }

Moments mask_moments(const BinaryMask& mask) {
    Moments m;
    double sx = 0.0, sy = 0.0;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) {
                m.area += 1.0;
                sx += x;
                sy += y;
            }
    if (m.area == 0.0) return m;
    m.cx = sx / m.area;
    m.cy = sy / m.area;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) {
                const double dx = x - m.cx, dy = y - m.cy;
                m.mu20 += dx * dx;
                m.mu02 += dy * dy;
                m.mu11 += dx * dy;
            }
    m.mu20 /= m.area;
    m.mu02 /= m.area;
    m.mu11 /= m.area;
    return m;
}

std::vector<Pixel> boundary_pixels(const BinaryMask& mask) {
    std::vector<Pixel> out;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y)) continue;
            if (!fg(mask, x - 1, y) || !fg(mask, x + 1, y) || !fg(mask, x, y - 1) || !fg(mask, x, y + 1))
                out.push_back({x, y});
        }
    return out;
}

std::vector<Pixel> trace_outer_contour(const BinaryMask& mask) {
    Pixel start{-1, -1};
    for (int x = 0; x < mask.width() && start.x < 0; ++x)
        for (int y = 0; y < mask.height(); ++y)
            if (mask(x, y)) {
                start = {x, y};
                break;
            }
    if (start.x < 0) return {};

    std::vector<Pixel> contour{start};
    Pixel p = start;
    int backtrack = 0;  // west of the leftmost pixel is background
    int first_move = -1;
    const std::size_t guard = 4 * mask.size() + 8;
    while (contour.size() < guard) {
        int move = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (backtrack + k) % 8;
            if (fg(mask, p.x + kRingDx[d], p.y + kRingDy[d])) {
                move = d;
                break;
            }
        }
        if (move < 0) break;  // isolated pixel
        if (p == start && move == first_move) break;
        if (first_move < 0) first_move = move;

        const int prev = (move + 7) % 8;
        const Pixel q{p.x + kRingDx[move], p.y + kRingDy[move]};
        backtrack = ring_index(p.x + kRingDx[prev] - q.x, p.y + kRingDy[prev] - q.y);
        p = q;
        contour.push_back(q);
    }
    if (contour.size() > 1 && contour.back() == start) contour.pop_back();
    return contour;
}

std::vector<std::vector<Pixel>> outer_contours(const BinaryMask& mask) {
    const ComponentLabels comps = label_components(mask, Connectivity::Eight);
    std::vector<std::vector<Pixel>> out;
    for (int id = 1; id <= comps.count; ++id) {
        BinaryMask single(mask.width(), mask.height());
        for (std::size_t i = 0; i < single.size(); ++i) single.values()[i] = comps.labels.values()[i] == id ? 1 : 0;
        out.push_back(trace_outer_contour(single));
    }
    return out;
}

double contour_length(const std::vector<Pixel>& contour) {
    if (contour.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < contour.size(); ++i) {
        const Pixel& a = contour[i];
        const Pixel& b = contour[(i + 1) % contour.size()];
        len += (a.x != b.x && a.y != b.y) ? std::sqrt(2.0) : 1.0;
    }
    return len;
}

double sample_mask_bilinear(const BinaryMask& mask, double x, double y) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double wx = x - x0, wy = y - y0;
    auto v = [&](int xx, int yy) { return fg(mask, xx, yy) ? 1.0 : 0.0; };
    const double top = v(x0, y0) * (1.0 - wx) + v(x0 + 1, y0) * wx;
    const double bottom = v(x0, y0 + 1) * (1.0 - wx) + v(x0 + 1, y0 + 1) * wx;
    return top * (1.0 - wy) + bottom * wy;
}

AlignedMask align_major_axis(const BinaryMask& mask) {
    const Moments m = mask_moments(mask);
    AlignedMask out;
    if (m.area == 0.0) return out;
    out.angle = m.major_axis_angle();

    double radius = 0.0;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) radius = std::max(radius, std::hypot(x - m.cx, y - m.cy));
    const int half = static_cast<int>(std::ceil(radius)) + 2;
    const int side = 2 * half;
    const double centre = half - 0.5;
    const double c = std::cos(out.angle), s = std::sin(out.angle);

    out.mask = BinaryMask(side, side);
    for (int v = 0; v < side; ++v)
        for (int u = 0; u < side; ++u) {
            const double du = u - centre, dv = v - centre;
            const double sx = m.cx + c * du - s * dv;
            const double sy = m.cy + s * du + c * dv;
            out.mask(u, v) = sample_mask_bilinear(mask, sx, sy) >= 0.5 ? 1 : 0;
        }
    return out;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const Point2& p = pts[i];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

std::size_t count_pixels_in_hull(const std::vector<Point2>& hull) {
    if (hull.empty()) return 0;
    double xmin = hull[0].x, xmax = hull[0].x, ymin = hull[0].y, ymax = hull[0].y;
    for (const Point2& p : hull) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    constexpr double eps = 1e-9;
    std::size_t count = 0;
    for (int y = static_cast<int>(std::ceil(ymin - eps)); y <= static_cast<int>(std::floor(ymax + eps)); ++y)
        for (int x = static_cast<int>(std::ceil(xmin - eps)); x <= static_cast<int>(std::floor(xmax + eps)); ++x) {
            const Point2 p{static_cast<double>(x), static_cast<double>(y)};
            bool inside = true;
            for (std::size_t i = 0; i < hull.size() && inside; ++i)
                inside = cross(hull[i], hull[(i + 1) % hull.size()], p) >= -eps;
            if (inside) ++count;
        }
    return count;
}

}  // namespace psl
