#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

using PixelSet = std::set<Px>;

PixelSet to_set(const std::vector<Px>& v) { return PixelSet(v.begin(), v.end()); }

struct Mom {
    double n = 0, cx = 0, cy = 0, m20 = 0, m02 = 0, m11 = 0;
};

Mom moments(const std::vector<Px>& px) {
    Mom m;
    double sx = 0, sy = 0;
    for (const Px& p : px) {
        m.n += 1;
        sx += p.x;
        sy += p.y;
    }
    m.cx = sx / m.n;
    m.cy = sy / m.n;
    for (const Px& p : px) {
        const double dx = p.x - m.cx, dy = p.y - m.cy;
        m.m20 += dx * dx;
        m.m02 += dy * dy;
        m.m11 += dx * dy;
    }
    m.m20 /= m.n;
    m.m02 /= m.n;
    m.m11 /= m.n;
    return m;
}

double theta_of(const Mom& m) { return 0.5 * std::atan2(2.0 * m.m11, m.m20 - m.m02); }

// Bilinear value of the indicator of `set` at a real position.
double bilinear(const PixelSet& set, double x, double y) {
    const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
    const double wx = x - x0, wy = y - y0;
    auto v = [&](int xx, int yy) { return set.count({xx, yy}) ? 1.0 : 0.0; };
    const double top = v(x0, y0) * (1.0 - wx) + v(x0 + 1, y0) * wx;
    const double bottom = v(x0, y0 + 1) * (1.0 - wx) + v(x0 + 1, y0 + 1) * wx;
    return top * (1.0 - wy) + bottom * wy;
}

// Major-axis aligned copy of the lesion, on the half-integer lattice centred
// on the centroid, returned as integer cells (a + K - 0.5, b + K - 0.5).
PixelSet aligned_cells(const std::vector<Px>& px, int& K) {
    const PixelSet set = to_set(px);
    const Mom m = moments(px);
    const double t = theta_of(m), c = std::cos(t), s = std::sin(t);
    double radius = 0;
    for (const Px& p : px) radius = std::max(radius, std::hypot(p.x - m.cx, p.y - m.cy));
    K = static_cast<int>(std::ceil(radius)) + 3;
    PixelSet out;
    for (int j = 0; j < 2 * K; ++j)
        for (int i = 0; i < 2 * K; ++i) {
            const double a = i - K + 0.5, b = j - K + 0.5;
            const double sx = m.cx + c * a - s * b;
            const double sy = m.cy + s * a + c * b;
            if (bilinear(set, sx, sy) >= 0.5) out.insert({i, j});
        }
    return out;
}

std::vector<std::vector<Px>> components8(const PixelSet& set) {
    std::vector<std::vector<Px>> comps;
    PixelSet seen;
    for (const Px& start : set) {
        if (seen.count(start)) continue;
        std::vector<Px> comp{start};
        seen.insert(start);
        for (std::size_t k = 0; k < comp.size(); ++k)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const Px q{comp[k].x + dx, comp[k].y + dy};
                    if (set.count(q) && !seen.count(q)) {
                        seen.insert(q);
                        comp.push_back(q);
                    }
                }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// Moore trace, clockwise on screen, from the raster-first pixel, stopped
// with Jacob's criterion (start re-entered from the initial backtrack).
std::vector<Px> moore(const PixelSet& set) {
    static const int ndx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
    static const int ndy[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    const Px start = *set.begin();
    std::vector<Px> out{start};
    Px p = start;
    Px back{start.x - 1, start.y};
    const Px start_back = back;
    for (std::size_t guard = 0; guard < 8 * set.size() + 16; ++guard) {
        int bdir = 0;
        for (int k = 0; k < 8; ++k)
            if (p.x + ndx[k] == back.x && p.y + ndy[k] == back.y) bdir = k;
        bool moved = false;
        for (int step = 1; step <= 8; ++step) {
            const int d = (bdir + step) % 8;
            const Px q{p.x + ndx[d], p.y + ndy[d]};
            if (set.count(q)) {
                const int pd = (d + 7) % 8;
                back = {p.x + ndx[pd], p.y + ndy[pd]};
                p = q;
                moved = true;
                break;
            }
        }
        if (!moved) return out;
        if (p == start && back == start_back) return out;
        out.push_back(p);
    }
    throw std::runtime_error("oracle trace did not close");
}

double chain_length(const std::vector<Px>& c) {
    if (c.size() < 2) return 0;
    double len = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Px& a = c[i];
        const Px& b = c[(i + 1) % c.size()];
        len += (std::abs(a.x - b.x) + std::abs(a.y - b.y) == 2) ? std::numbers::sqrt2 : 1.0;
    }
    return len;
}

std::vector<Px> boundary_of(const PixelSet& set) {
    std::vector<Px> out;
    for (const Px& p : set)
        if (!set.count({p.x - 1, p.y}) || !set.count({p.x + 1, p.y}) || !set.count({p.x, p.y - 1}) ||
            !set.count({p.x, p.y + 1}))
            out.push_back(p);
    return out;
}

std::int64_t cross(const Px& o, const Px& a, const Px& b) {
    return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) - static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

std::int64_t dist2(const Px& a, const Px& b) {
    return static_cast<std::int64_t>(a.x - b.x) * (a.x - b.x) + static_cast<std::int64_t>(a.y - b.y) * (a.y - b.y);
}

// Gift wrapping over integer points.
std::vector<Px> jarvis(std::vector<Px> pts) {
    std::sort(pts.begin(), pts.end(), [](const Px& a, const Px& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Px> hull;
    Px cur = pts[0];
    do {
        hull.push_back(cur);
        Px next = pts[0] == cur ? pts[1] : pts[0];
        for (const Px& q : pts) {
            if (q == cur) continue;
            const std::int64_t c = cross(cur, next, q);
            if (c < 0 || (c == 0 && dist2(cur, q) > dist2(cur, next))) next = q;
        }
        cur = next;
        if (hull.size() > pts.size()) throw std::runtime_error("oracle hull did not close");
    } while (!(cur == hull[0]));
    return hull;
}

std::size_t hull_pixels(const std::vector<Px>& hull) {
    int x0 = hull[0].x, x1 = x0, y0 = hull[0].y, y1 = y0;
    for (const Px& p : hull) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    std::size_t n = 0;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            bool nonneg = true, nonpos = true;
            for (std::size_t i = 0; i < hull.size(); ++i) {
                const std::int64_t c = cross(hull[i], hull[(i + 1) % hull.size()], {x, y});
                nonneg = nonneg && c >= 0;
                nonpos = nonpos && c <= 0;
            }
            if (nonneg || nonpos) ++n;
        }
    return n;
}

double lum_at(const psl::RasterImage& img, int x, int y) {
    x = std::clamp(x, 0, img.width() - 1);
    y = std::clamp(y, 0, img.height() - 1);
    return (img.at(x, y, 0) + img.at(x, y, 1) + img.at(x, y, 2)) / 3.0;
}

std::array<double, 3> hsv(double r, double g, double b) {
    const double v = std::max({r, g, b});
    const double c = v - std::min({r, g, b});
    const double s = v == 0 ? 0 : c / v;
    double h = 0;
    if (c > 0) {
        double hp;
        if (v == r) {
            hp = (g - b) / c;
            if (hp < 0) hp += 6.0;
        }
        else if (v == g) hp = (b - r) / c + 2.0;
        else hp = (r - g) / c + 4.0;
        h = hp / 6.0;
        if (h >= 1.0) h -= 1.0;
    }
    return {h, s, v};
}

std::map<Px, int> quantize(const psl::GrayImage& gray, const std::vector<Px>& px) {
    double lo = 1e300, hi = -1e300;
    for (const Px& p : px) {
        lo = std::min(lo, gray(p.x, p.y));
        hi = std::max(hi, gray(p.x, p.y));
    }
    std::map<Px, int> q;
    for (const Px& p : px) {
        int k = 0;
        if (hi > lo) k = std::min(7, static_cast<int>(std::floor((gray(p.x, p.y) - lo) / (hi - lo) * 8)));
        q[p] = k;
    }
    return q;
}

}  // namespace

std::vector<Px> pixel_list(const psl::BinaryMask& mask) {
    std::vector<Px> out;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask(x, y)) out.push_back({x, y});
    return out;
}

psl::BinaryMask isnn_labels(const psl::LabImage& img, const std::vector<psl::simd::SeedPoint>& seeds,
                            const std::vector<bool>& seed_is_fg, double m) {
    const double S = std::sqrt(static_cast<double>(img.height()) * img.height() +
                               static_cast<double>(img.width()) * img.width());
    const double w = m / S;
    psl::BinaryMask out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double best = INFINITY;
            std::size_t arg = 0;
            for (std::size_t s = 0; s < seeds.size(); ++s) {
                const double dl = img.L(x, y) - seeds[s].L;
                const double da = img.a(x, y) - seeds[s].a;
                const double db = img.b(x, y) - seeds[s].b;
                const double dx = x - seeds[s].x;
                const double dy = y - seeds[s].y;
                const double d = std::sqrt(dl * dl + da * da + db * db) + w * std::sqrt(dx * dx + dy * dy);
                if (d < best) {
                    best = d;
                    arg = s;
                }
            }
            out(x, y) = seed_is_fg[arg] ? 1 : 0;
        }
    for (std::size_t s = 0; s < seeds.size(); ++s)
        out(static_cast<int>(seeds[s].x), static_cast<int>(seeds[s].y)) = seed_is_fg[s] ? 1 : 0;
    return out;
}

std::array<double, 3> shape_asymmetry(const psl::BinaryMask& mask) {
    const std::vector<Px> px = pixel_list(mask);
    const PixelSet set = to_set(px);
    const Mom m = moments(px);

    // A1: reflect every candidate cell through the centroid.
    PixelSet candidates = set;
    for (const Px& p : px) {
        const double rx = 2 * m.cx - p.x, ry = 2 * m.cy - p.y;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                candidates.insert({static_cast<int>(std::floor(rx)) + dx, static_cast<int>(std::floor(ry)) + dy});
    }
    std::size_t inter = 0, uni = 0;
    for (const Px& u : candidates) {
        const bool a = set.count(u) > 0;
        const bool b = bilinear(set, 2 * m.cx - u.x, 2 * m.cy - u.y) >= 0.5;
        inter += a && b;
        uni += a || b;
    }

    int K = 0;
    const PixelSet al = aligned_cells(px, K);
    if (al.empty()) return {static_cast<double>(inter) / uni, 1.0, 1.0};
    std::size_t i_lr = 0, i_tb = 0;
    for (const Px& c : al) {
        i_lr += al.count({2 * K - 1 - c.x, c.y});
        i_tb += al.count({c.x, 2 * K - 1 - c.y});
    }
    const double n = static_cast<double>(al.size());
    return {static_cast<double>(inter) / uni, i_lr / (2 * n - i_lr), i_tb / (2 * n - i_tb)};
}

double perimeter(const psl::BinaryMask& mask) {
    double p = 0;
    for (const auto& comp : components8(to_set(pixel_list(mask)))) p += chain_length(moore(to_set(comp)));
    return p;
}

std::vector<Px> boundary(const psl::BinaryMask& mask) { return boundary_of(to_set(pixel_list(mask))); }

double solidity(const psl::BinaryMask& mask) {
    const std::vector<Px> px = pixel_list(mask);
    const std::size_t hull = hull_pixels(jarvis(boundary_of(to_set(px))));
    return std::min(1.0, static_cast<double>(px.size()) / hull);
}

double box_dimension(const std::vector<Px>& pixels) {
    const int sizes[6] = {2, 4, 8, 16, 32, 64};
    std::vector<double> xs, ys;
    for (int r : sizes) {
        std::set<std::pair<int, int>> boxes;
        for (const Px& p : pixels) boxes.insert({p.x / r, p.y / r});
        if (r == 2 && boxes.size() < 2) return 0.0;
        xs.push_back(-std::log(static_cast<double>(r)));
        ys.push_back(std::log(static_cast<double>(boxes.size())));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / xs.size();
        my += ys[i] / ys.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double jaworek(const psl::BinaryMask& mask) {
    int K = 0;
    const PixelSet al = aligned_cells(pixel_list(mask), K);
    if (al.empty()) return 0;
    auto comps = components8(al);
    std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    const std::vector<Px> contour = moore(to_set(comps[0]));
    int x0 = contour[0].x, x1 = x0, y0 = contour[0].y, y1 = y0;
    for (const Px& p : contour) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const int n = static_cast<int>(contour.size());
    const int w = std::max(5, static_cast<int>(std::lround(0.05 * n)));
    if (n < w) return 0;
    std::vector<double> f;
    for (const Px& p : contour) f.push_back(std::min({p.x - x0, x1 - p.x, p.y - y0, y1 - p.y}));
    std::vector<double> sm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int t = 0; t < w; ++t) s += f[static_cast<std::size_t>(((k - w / 2 + t) % n + n) % n)];
        sm[static_cast<std::size_t>(k)] = s / w;
    }
    std::vector<int> sg;
    for (int k = 0; k < n; ++k) {
        const double d = sm[static_cast<std::size_t>((k + 1) % n)] - sm[static_cast<std::size_t>(k)];
        if (d > 1e-9) sg.push_back(1);
        if (d < -1e-9) sg.push_back(-1);
    }
    int changes = 0;
    for (std::size_t i = 0; i + 1 < sg.size(); ++i) changes += sg[i] != sg[i + 1];
    if (sg.size() > 1) changes += sg.back() != sg.front();
    return changes;
}

std::array<double, 16> glcm(const psl::GrayImage& gray, const psl::BinaryMask& mask) {
    const std::vector<Px> px = pixel_list(mask);
    const auto q = quantize(gray, px);
    const int off[4][2] = {{1, 0}, {1, -1}, {0, -1}, {-1, -1}};
    std::array<double, 16> out{};
    for (int t = 0; t < 4; ++t) {
        std::map<std::pair<int, int>, double> count;
        double total = 0;
        for (const Px& p : px) {
            const auto it = q.find({p.x + off[t][0], p.y + off[t][1]});
            if (it == q.end()) continue;
            const int a = q.at(p), b = it->second;
            count[{a, b}] += 1;
            count[{b, a}] += 1;
            total += 2;
        }
        if (total == 0) {
            out[4 * t + 0] = 0;
            out[4 * t + 1] = 0;
            out[4 * t + 2] = 1;
            out[4 * t + 3] = 1;
            continue;
        }
        double con = 0, ene = 0, hom = 0, mi = 0, mj = 0;
        for (const auto& [ij, c] : count) {
            const double p = c / total, gi = ij.first / 7.0, gj = ij.second / 7.0;
            con += (gi - gj) * (gi - gj) * p;
            ene += p * p;
            hom += p / (1 + (gi - gj) * (gi - gj));
            mi += gi * p;
            mj += gj * p;
        }
        double vi = 0, vj = 0, cov = 0;
        for (const auto& [ij, c] : count) {
            const double p = c / total, di = ij.first / 7.0 - mi, dj = ij.second / 7.0 - mj;
            vi += di * di * p;
            vj += dj * dj * p;
            cov += di * dj * p;
        }
        const double den = std::sqrt(vi * vj);
        out[4 * t + 0] = con;
        out[4 * t + 1] = den > 1e-15 ? std::clamp(cov / den, -1.0, 1.0) : 0.0;
        out[4 * t + 2] = ene;
        out[4 * t + 3] = hom;
    }
    return out;
}

std::array<double, 7> glrlm(const psl::GrayImage& gray, const psl::BinaryMask& mask) {
    const std::vector<Px> px = pixel_list(mask);
    const auto q = quantize(gray, px);
    const int W = mask.width(), H = mask.height();
    std::map<std::pair<int, int>, double> runs;  // (level 1.., length) -> count

    auto walk = [&](std::vector<Px> line) {
        int level = -1, len = 0;
        for (const Px& p : line) {
            const auto it = q.find(p);
            const int l = it == q.end() ? -1 : it->second;
            if (l == level && l >= 0) {
                ++len;
                continue;
            }
            if (level >= 0) runs[{level + 1, len}] += 1;
            level = l;
            len = l >= 0 ? 1 : 0;
        }
        if (level >= 0) runs[{level + 1, len}] += 1;
    };
    for (int y = 0; y < H; ++y) {
        std::vector<Px> line;
        for (int x = 0; x < W; ++x) line.push_back({x, y});
        walk(line);
    }
    for (int x = 0; x < W; ++x) {
        std::vector<Px> line;
        for (int y = 0; y < H; ++y) line.push_back({x, y});
        walk(line);
    }
    for (int s = 0; s <= W + H - 2; ++s) {  // x + y = s
        std::vector<Px> line;
        for (int x = 0; x < W; ++x)
            if (s - x >= 0 && s - x < H) line.push_back({x, s - x});
        walk(line);
    }
    for (int d = -(H - 1); d <= W - 1; ++d) {  // x - y = d
        std::vector<Px> line;
        for (int y = 0; y < H; ++y)
            if (y + d >= 0 && y + d < W) line.push_back({y + d, y});
        walk(line);
    }

    double h = 0, npix = 0, sre = 0, lre = 0, lgre = 0, hgre = 0;
    std::map<int, double> by_level, by_len;
    for (const auto& [key, c] : runs) {
        const double i = key.first, j = key.second;
        h += c;
        npix += c * j;
        sre += c / (j * j);
        lre += c * j * j;
        lgre += c / (i * i);
        hgre += c * i * i;
        by_level[key.first] += c;
        by_len[key.second] += c;
    }
    double gln = 0, rln = 0;
    for (const auto& [_, v] : by_level) gln += v * v;
    for (const auto& [_, v] : by_len) rln += v * v;
    return {sre / h, lre / h, gln / h, rln / h, h / npix, lgre / h, hgre / h};
}

std::array<double, 59> features(const psl::RasterImage& img, const psl::BinaryMask& mask) {
    std::array<double, 59> f{};
    const std::vector<Px> px = pixel_list(mask);
    const PixelSet set = to_set(px);
    const Mom m = moments(px);

    const auto a = shape_asymmetry(mask);
    f[0] = a[0];
    f[1] = a[1];
    f[2] = a[2];

    // A4, A5: halves in the principal frame.
    {
        const double t = theta_of(m), c = std::cos(t), s = std::sin(t);
        std::map<int, std::map<int, double>> hist[4];  // half -> channel -> bin -> count
        double cnt[4] = {0, 0, 0, 0};
        for (const Px& p : px) {
            const double dx = p.x - m.cx, dy = p.y - m.cy;
            const double u = c * dx + s * dy, v = -s * dx + c * dy;
            std::vector<int> halves;
            if (u < -1e-9) halves.push_back(0);
            if (u > 1e-9) halves.push_back(1);
            if (v < -1e-9) halves.push_back(2);
            if (v > 1e-9) halves.push_back(3);
            for (int h : halves) {
                cnt[h] += 1;
                for (int ch = 0; ch < 3; ++ch)
                    hist[h][ch][static_cast<int>(std::lround(std::clamp(img.at(p.x, p.y, ch) / 255.0, 0.0, 1.0) * 255))] += 1;
            }
        }
        for (int pair = 0; pair < 2; ++pair) {
            const int l = 2 * pair, r = 2 * pair + 1;
            if (cnt[l] == 0 || cnt[r] == 0) {
                f[3 + pair] = 6.0;
                continue;
            }
            double d = 0;
            for (int ch = 0; ch < 3; ++ch) {
                std::set<int> bins;
                for (const auto& [b, _] : hist[l][ch]) bins.insert(b);
                for (const auto& [b, _] : hist[r][ch]) bins.insert(b);
                for (int b : bins) {
                    const double h1 = hist[l][ch].count(b) ? hist[l][ch][b] / cnt[l] : 0.0;
                    const double h2 = hist[r][ch].count(b) ? hist[r][ch][b] / cnt[r] : 0.0;
                    d += (h1 - h2) * (h1 - h2) / (h1 + h2);
                }
            }
            f[3 + pair] = d;
        }
    }

    // B1..B7
    const std::vector<Px> bnd = boundary_of(set);
    if (bnd.size() < 3) {
        f[5] = 1;
        f[7] = 0;
        f[10] = 1;
    } else {
        const double p = perimeter(mask);
        f[5] = p * p / (4 * std::numbers::pi * m.n);
        std::vector<double> rad;
        for (const Px& q : bnd) rad.push_back(std::hypot(q.x - m.cx, q.y - m.cy));
        double mean = 0;
        for (double r : rad) mean += r;
        mean /= rad.size();
        double var = 0;
        for (double r : rad) var += (r - mean) * (r - mean);
        var /= rad.size();
        f[7] = mean > 0 ? var / (mean * mean) : 0;
        f[10] = solidity(mask);
    }
    f[6] = box_dimension(bnd);
    {
        double s1 = 0, s2 = 0;
        for (const Px& q : bnd) {
            auto L = [&](int dx, int dy) { return lum_at(img, q.x + dx, q.y + dy); };
            const double gx = L(1, -1) + 2 * L(1, 0) + L(1, 1) - L(-1, -1) - 2 * L(-1, 0) - L(-1, 1);
            const double gy = L(-1, 1) + 2 * L(0, 1) + L(1, 1) - L(-1, -1) - 2 * L(0, -1) - L(1, -1);
            const double e = std::sqrt(gx * gx + gy * gy);
            s1 += e;
            s2 += e * e;
        }
        const double n = static_cast<double>(bnd.size());
        f[8] = n > 0 ? s1 / n : 0;
        f[9] = n > 0 ? std::max(0.0, s2 / n - (s1 / n) * (s1 / n)) : 0;
    }
    f[11] = jaworek(mask);

    // C1..C24 from bin-rounded pixel values.
    {
        std::vector<std::array<double, 6>> vals;
        for (const Px& p : px) {
            const double r = std::clamp(img.at(p.x, p.y, 0) / 255.0, 0.0, 1.0);
            const double g = std::clamp(img.at(p.x, p.y, 1) / 255.0, 0.0, 1.0);
            const double b = std::clamp(img.at(p.x, p.y, 2) / 255.0, 0.0, 1.0);
            const auto h = hsv(r, g, b);
            std::array<double, 6> v{r, g, b, h[0], h[1], h[2]};
            for (double& x : v) x = std::lround(x * 255) / 255.0;
            vals.push_back(v);
        }
        for (int ch = 0; ch < 6; ++ch) {
            double mean = 0;
            for (const auto& v : vals) mean += v[ch];
            mean /= vals.size();
            double var = 0, sk = 0;
            for (const auto& v : vals) {
                var += (v[ch] - mean) * (v[ch] - mean);
                sk += (v[ch] - mean) * (v[ch] - mean) * (v[ch] - mean);
            }
            var /= vals.size();
            sk /= vals.size();
            f[12 + 3 * ch] = mean;
            f[13 + 3 * ch] = var;
            f[14 + 3 * ch] = sk;
            f[30 + ch] = std::log(mean > 0 ? std::max(var / mean, 1e-9) : 1e-9);
        }
    }

    psl::GrayImage gray(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) gray(x, y) = lum_at(img, x, y);
    const auto t = glcm(gray, mask);
    for (int i = 0; i < 16; ++i) f[36 + i] = t[i];
    const auto r = glrlm(gray, mask);
    for (int i = 0; i < 7; ++i) f[52 + i] = r[i];
    return f;
}

std::vector<std::vector<double>> gauss_solve(std::vector<std::vector<double>> A, std::vector<std::vector<double>> B) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(B[col], B[piv]);
        if (A[col][col] == 0) throw std::runtime_error("singular system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            for (std::size_t c = 0; c < B[r].size(); ++c) B[r][c] -= f * B[col][c];
        }
    }
    std::vector<std::vector<double>> X(n, std::vector<double>(B.empty() ? 0 : B[0].size()));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t c = 0; c < X[i].size(); ++c) {
            double s = B[i][c];
            for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * X[k][c];
            X[i][c] = s / A[i][i];
        }
    return X;
}

double mann_whitney_auc(const std::vector<double>& scores, const std::vector<int>& positive) {
    double u = 0, P = 0, N = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (positive[i]) ++P;
        else ++N;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!positive[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (positive[j]) continue;
            if (scores[i] > scores[j]) u += 1;
            else if (scores[i] == scores[j]) u += 0.5;
        }
    }
    return u / (P * N);
}

}  // namespace oracle
