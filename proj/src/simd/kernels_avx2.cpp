// Compiled with -mavx2 (never -mfma). Only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "psl/simd/kernels.hpp"

namespace psl::simd::avx2 {

void nearest_seed(const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::int32_t* out) {
    const std::size_t n_seeds = seeds.size();
    const __m256d weight = _mm256_set1_pd(spatial_weight);
    const __m256d lane_offsets = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const int vec_end = width - width % 4;

    for (int y = 0; y < height; ++y) {
        const __m256d py = _mm256_set1_pd(static_cast<double>(y));
        const std::size_t row = static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
        for (int x = 0; x < vec_end; x += 4) {
            const std::size_t i = row + static_cast<std::size_t>(x);
            const __m256d pl = _mm256_loadu_pd(L + i);
            const __m256d pa = _mm256_loadu_pd(a + i);
            const __m256d pb = _mm256_loadu_pd(b + i);
            const __m256d px = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(x)), lane_offsets);

            __m256d best = _mm256_set1_pd(INFINITY);
            __m256d best_idx = _mm256_setzero_pd();
            for (std::size_t s = 0; s < n_seeds; ++s) {
                const SeedPoint& q = seeds[s];
                const __m256d dl = _mm256_sub_pd(pl, _mm256_set1_pd(q.L));
                const __m256d da = _mm256_sub_pd(pa, _mm256_set1_pd(q.a));
                const __m256d db = _mm256_sub_pd(pb, _mm256_set1_pd(q.b));
                __m256d acc = _mm256_add_pd(_mm256_mul_pd(dl, dl), _mm256_mul_pd(da, da));
                acc = _mm256_add_pd(acc, _mm256_mul_pd(db, db));
                const __m256d dlab = _mm256_sqrt_pd(acc);
                const __m256d dx = _mm256_sub_pd(px, _mm256_set1_pd(q.x));
                const __m256d dy = _mm256_sub_pd(py, _mm256_set1_pd(q.y));
                const __m256d dxy = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
                const __m256d d = _mm256_add_pd(dlab, _mm256_mul_pd(weight, dxy));
                const __m256d closer = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
                best = _mm256_blendv_pd(best, d, closer);
                best_idx = _mm256_blendv_pd(best_idx, _mm256_set1_pd(static_cast<double>(s)), closer);
            }
            alignas(32) double idx[4];
            _mm256_store_pd(idx, best_idx);
            for (int k = 0; k < 4; ++k) out[i + static_cast<std::size_t>(k)] = static_cast<std::int32_t>(idx[k]);
        }
        if (vec_end < width) {
            // Tail columns: run the scalar reference on a one-row window.
            const std::size_t i = row + static_cast<std::size_t>(vec_end);
            const int tail = width - vec_end;
            for (int k = 0; k < tail; ++k) {
                const double px = static_cast<double>(vec_end + k);
                const double pyv = static_cast<double>(y);
                double best = INFINITY;
                std::int32_t best_idx = 0;
                for (std::size_t s = 0; s < n_seeds; ++s) {
                    const SeedPoint& q = seeds[s];
                    const std::size_t p = i + static_cast<std::size_t>(k);
                    const double dl = L[p] - q.L;
                    const double da = a[p] - q.a;
                    const double db = b[p] - q.b;
                    const double dlab = std::sqrt(dl * dl + da * da + db * db);
                    const double dx = px - q.x;
                    const double dy = pyv - q.y;
                    const double d = dlab + spatial_weight * std::sqrt(dx * dx + dy * dy);
                    if (d < best) {
                        best = d;
                        best_idx = static_cast<std::int32_t>(s);
                    }
                }
                out[i + static_cast<std::size_t>(k)] = best_idx;
            }
        }
    }
}

void squared_distances(const double* query, std::size_t dim, const double* rows, std::size_t n_rows, double* out) {
    // Four rows per step, one lane per row, so each lane accumulates in the
    // same j order as the scalar loop.
    const std::size_t vec_end = n_rows - n_rows % 4;
    for (std::size_t r = 0; r < vec_end; r += 4) {
        const double* r0 = rows + r * dim;
        const double* r1 = r0 + dim;
        const double* r2 = r1 + dim;
        const double* r3 = r2 + dim;
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < dim; ++j) {
            const __m256d v = _mm256_set_pd(r3[j], r2[j], r1[j], r0[j]);
            const __m256d d = _mm256_sub_pd(v, _mm256_set1_pd(query[j]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(out + r, acc);
    }
    for (std::size_t r = vec_end; r < n_rows; ++r) {
        const double* row = rows + r * dim;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = row[j] - query[j];
            acc = acc + d * d;
        }
        out[r] = acc;
    }
}

}  // namespace psl::simd::avx2
