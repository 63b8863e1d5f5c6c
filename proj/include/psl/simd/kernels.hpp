#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on
// x86-64, an AVX2 variant picked at runtime. Variants evaluate the same
// expression in the same order without FMA, so results are bit-identical.

#include <cstddef>
#include <cstdint>
#include <span>

namespace psl::simd {

enum class Level { Scalar, Avx2 };

const char* to_string(Level level);

/// Best level this CPU and build support.
Level detected_level();

/// Level used by the dispatching entry points. Defaults to detected_level(),
/// or Scalar when PSL_SIMD=scalar is set in the environment.
Level active_level();

/// Overrides the active level (clamped to detected_level()). Returns the
/// level actually set.
Level set_active_level(Level level);

struct SeedPoint {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// For every pixel p of a width x height planar Lab image, writes the index
/// i minimising  |lab(p) - lab(q_i)| + spatial_weight * |xy(p) - xy(q_i)|.
/// Ties go to the lowest index.
void nearest_seed(const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::span<std::int32_t> out);
void nearest_seed(Level level, const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::span<std::int32_t> out);

/// out[r] = sum_j (rows[r*dim + j] - query[j])^2, accumulated in j order.
void squared_distances(std::span<const double> query, const double* rows, std::size_t n_rows, std::span<double> out);
void squared_distances(Level level, std::span<const double> query, const double* rows, std::size_t n_rows,
                       std::span<double> out);

namespace scalar {
void nearest_seed(const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::int32_t* out);
void squared_distances(const double* query, std::size_t dim, const double* rows, std::size_t n_rows, double* out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PSL_HAVE_AVX2_KERNELS 1
namespace avx2 {
void nearest_seed(const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::int32_t* out);
void squared_distances(const double* query, std::size_t dim, const double* rows, std::size_t n_rows, double* out);
}  // namespace avx2
#endif

}  // namespace psl::simd
