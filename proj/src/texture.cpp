#include "psl/texture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psl/imaging.hpp"

namespace psl {

QuantizedLesion quantize_lesion(const GrayImage& gray, const BinaryMask& mask, int levels) {
    if (gray.width() != mask.width() || gray.height() != mask.height())
        throw InvalidInput("image and mask sizes differ");
    if (levels < 2) throw InvalidInput("at least two gray levels are required");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask.values()[i]) {
            lo = std::min(lo, gray.values()[i]);
            hi = std::max(hi, gray.values()[i]);
        }

    QuantizedLesion q{Grid<int>(mask.width(), mask.height(), -1), levels};
    const double range = hi - lo;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask.values()[i]) continue;
        int k = 0;
        if (range > 0.0) k = std::min(levels - 1, static_cast<int>(std::floor((gray.values()[i] - lo) / range * levels)));
        q.levels.values()[i] = k;
    }
    return q;
}

QuantizedLesion quantize_lesion(const RasterImage& img, const BinaryMask& mask, int levels) {
    return quantize_lesion(luminance(img), mask, levels);
}

GlcmMatrix glcm_matrix(const QuantizedLesion& q, Offset offset) {
    const int n = q.level_count;
    GlcmMatrix m{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0), 0.0};
    const Grid<int>& g = q.levels;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const int a = g(x, y);
            if (a < 0 || !g.contains(x + offset.dx, y + offset.dy)) continue;
            const int b = g(x + offset.dx, y + offset.dy);
            if (b < 0) continue;
            m.p[static_cast<std::size_t>(a * n + b)] += 1.0;
            m.p[static_cast<std::size_t>(b * n + a)] += 1.0;
            m.pairs += 2.0;
        }
    if (m.pairs > 0.0)
        for (double& v : m.p) v /= m.pairs;
    return m;
}

GlcmStats glcm_stats(const GlcmMatrix& m) {
    GlcmStats s;
    if (m.empty()) return s;
    const int n = m.levels;
    const double scale = 1.0 / (n - 1);
    double mu_i = 0.0, mu_j = 0.0;
    s.energy = 0.0;
    s.homogeneity = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double p = m(i, j);
            const double gi = i * scale, gj = j * scale;
            s.contrast += (gi - gj) * (gi - gj) * p;
            s.energy += p * p;
            s.homogeneity += p / (1.0 + (gi - gj) * (gi - gj));
            mu_i += gi * p;
            mu_j += gj * p;
        }
    double var_i = 0.0, var_j = 0.0, cov = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double p = m(i, j);
            const double di = i * scale - mu_i, dj = j * scale - mu_j;
            var_i += di * di * p;
            var_j += dj * dj * p;
            cov += di * dj * p;
        }
    const double denom = std::sqrt(var_i) * std::sqrt(var_j);
    s.correlation = denom > 1e-15 ? std::clamp(cov / denom, -1.0, 1.0) : 0.0;
    return s;
}

std::array<double, 16> glcm_features(const QuantizedLesion& q, Diagnostics* diag) {
    std::array<double, 16> out{};
    for (std::size_t k = 0; k < kTextureOffsets.size(); ++k) {
        const GlcmMatrix m = glcm_matrix(q, kTextureOffsets[k]);
        if (m.empty()) flag(diag, "GLCM: no lesion pixel pairs at " + std::to_string(45 * k) + " degrees");
        const GlcmStats s = glcm_stats(m);
        out[4 * k] = s.contrast;
        out[4 * k + 1] = s.correlation;
        out[4 * k + 2] = s.energy;
        out[4 * k + 3] = s.homogeneity;
    }
    return out;
}

std::array<double, 16> glcm_features(const RasterImage& img, const BinaryMask& mask, Diagnostics* diag) {
    return glcm_features(quantize_lesion(img, mask), diag);
}

double GlrlmMatrix::runs() const {
    double h = 0.0;
    for (double v : counts) h += v;
    return h;
}

double GlrlmMatrix::run_pixels() const {
    double n = 0.0;
    for (int i = 0; i < levels; ++i)
        for (int j = 1; j <= max_run; ++j) n += j * (*this)(i, j);
    return n;
}

namespace {

void resize_runs(GlrlmMatrix& m, int max_run) {
    if (max_run <= m.max_run) return;
    std::vector<double> grown(static_cast<std::size_t>(m.levels * max_run), 0.0);
    for (int i = 0; i < m.levels; ++i)
        for (int j = 0; j < m.max_run; ++j)
            grown[static_cast<std::size_t>(i * max_run + j)] = m.counts[static_cast<std::size_t>(i * m.max_run + j)];
    m.counts = std::move(grown);
    m.max_run = max_run;
}

}  // namespace

GlrlmMatrix glrlm_matrix(const QuantizedLesion& q, Offset dir) {
    const Grid<int>& g = q.levels;
    GlrlmMatrix m{q.level_count, 0, {}};
    resize_runs(m, std::max(1, std::max(g.width(), g.height())));
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const int level = g(x, y);
            if (level < 0) continue;
            // Only start counting at the first pixel of a run.
            const int px = x - dir.dx, py = y - dir.dy;
            if (g.contains(px, py) && g(px, py) == level) continue;
            int len = 1;
            while (g.contains(x + len * dir.dx, y + len * dir.dy) && g(x + len * dir.dx, y + len * dir.dy) == level) ++len;
            m.counts[static_cast<std::size_t>(level * m.max_run + len - 1)] += 1.0;
        }
    return m;
}

GlrlmMatrix glrlm_summed(const QuantizedLesion& q) {
    GlrlmMatrix total = glrlm_matrix(q, kTextureOffsets[0]);
    for (std::size_t k = 1; k < kTextureOffsets.size(); ++k) {
        const GlrlmMatrix m = glrlm_matrix(q, kTextureOffsets[k]);
        resize_runs(total, m.max_run);
        for (int i = 0; i < m.levels; ++i)
            for (int j = 1; j <= m.max_run; ++j)
                total.counts[static_cast<std::size_t>(i * total.max_run + j - 1)] += m(i, j);
    }
    return total;
}

GlrlmStats glrlm_stats(const GlrlmMatrix& m) {
    GlrlmStats s;
    const double h = m.runs();
    if (h == 0.0) return s;
    for (int i = 0; i < m.levels; ++i) {
        const double gi = i + 1.0;
        double row = 0.0;
        for (int j = 1; j <= m.max_run; ++j) {
            const double p = m(i, j);
            if (p == 0.0) continue;
            s.sre += p / (static_cast<double>(j) * j);
            s.lre += p * j * j;
            s.lgre += p / (gi * gi);
            s.hgre += p * gi * gi;
            row += p;
        }
        s.gln += row * row;
    }
    for (int j = 1; j <= m.max_run; ++j) {
        double col = 0.0;
        for (int i = 0; i < m.levels; ++i) col += m(i, j);
        s.rln += col * col;
    }
    s.sre /= h;
    s.lre /= h;
    s.gln /= h;
    s.rln /= h;
    s.lgre /= h;
    s.hgre /= h;
    s.rp = h / m.run_pixels();
    return s;
}

std::array<double, 7> glrlm_features(const QuantizedLesion& q) {
    const GlrlmStats s = glrlm_stats(glrlm_summed(q));
    return {s.sre, s.lre, s.gln, s.rln, s.rp, s.lgre, s.hgre};
}

std::array<double, 7> glrlm_features(const RasterImage& img, const BinaryMask& mask) {
    return glrlm_features(quantize_lesion(img, mask));
}

}  // namespace psl
