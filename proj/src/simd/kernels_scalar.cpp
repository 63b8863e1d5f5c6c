#include <cmath>

#include "psl/simd/kernels.hpp"

namespace psl::simd::scalar {

void nearest_seed(const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::int32_t* out) {
    const std::size_t n_seeds = seeds.size();
    for (int y = 0; y < height; ++y) {
        const double py = static_cast<double>(y);
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
            const double px = static_cast<double>(x);
            double best = INFINITY;
            std::int32_t best_idx = 0;
            for (std::size_t s = 0; s < n_seeds; ++s) {
                const SeedPoint& q = seeds[s];
                const double dl = L[i] - q.L;
                const double da = a[i] - q.a;
                const double db = b[i] - q.b;
                const double dlab = std::sqrt(dl * dl + da * da + db * db);
                const double dx = px - q.x;
                const double dy = py - q.y;
                const double dxy = std::sqrt(dx * dx + dy * dy);
                const double d = dlab + spatial_weight * dxy;
                if (d < best) {
                    best = d;
                    best_idx = static_cast<std::int32_t>(s);
                }
            }
            out[i] = best_idx;
        }
    }
}

void squared_distances(const double* query, std::size_t dim, const double* rows, std::size_t n_rows, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) {
        const double* row = rows + r * dim;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = row[j] - query[j];
            acc = acc + d * d;
        }
        out[r] = acc;
    }
}

}  // namespace psl::simd::scalar
