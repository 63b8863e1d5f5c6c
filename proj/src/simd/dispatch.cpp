#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "psl/simd/kernels.hpp"

namespace psl::simd {

namespace {

Level initial_level() {
    const char* env = std::getenv("PSL_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Level::Scalar;
    return detected_level();
}

std::atomic<Level>& level_slot() {
    static std::atomic<Level> slot{initial_level()};
    return slot;
}

void check_seed_args(int width, int height, std::span<const SeedPoint> seeds, std::span<std::int32_t> out) {
    if (width < 0 || height < 0) throw std::invalid_argument("nearest_seed: negative dimensions");
    if (seeds.empty()) throw std::invalid_argument("nearest_seed: no seeds");
    if (out.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("nearest_seed: output size mismatch");
}

}  // namespace

const char* to_string(Level level) {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
    }
    return "unknown";
}

Level detected_level() {
#ifdef PSL_HAVE_AVX2_KERNELS
    static const bool has_avx2 = __builtin_cpu_supports("avx2");
    if (has_avx2) return Level::Avx2;
#endif
    return Level::Scalar;
}

Level active_level() { return level_slot().load(std::memory_order_relaxed); }

Level set_active_level(Level level) {
    if (level == Level::Avx2 && detected_level() != Level::Avx2) level = Level::Scalar;
    level_slot().store(level, std::memory_order_relaxed);
    return level;
}

void nearest_seed(Level level, const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::span<std::int32_t> out) {
    check_seed_args(width, height, seeds, out);
#ifdef PSL_HAVE_AVX2_KERNELS
    if (level == Level::Avx2 && detected_level() == Level::Avx2) {
        avx2::nearest_seed(L, a, b, width, height, seeds, spatial_weight, out.data());
        return;
    }
#endif
    scalar::nearest_seed(L, a, b, width, height, seeds, spatial_weight, out.data());
}

void nearest_seed(const double* L, const double* a, const double* b, int width, int height,
                  std::span<const SeedPoint> seeds, double spatial_weight, std::span<std::int32_t> out) {
    nearest_seed(active_level(), L, a, b, width, height, seeds, spatial_weight, out);
}

void squared_distances(Level level, std::span<const double> query, const double* rows, std::size_t n_rows,
                       std::span<double> out) {
    if (out.size() != n_rows) throw std::invalid_argument("squared_distances: output size mismatch");
#ifdef PSL_HAVE_AVX2_KERNELS
    if (level == Level::Avx2 && detected_level() == Level::Avx2) {
        avx2::squared_distances(query.data(), query.size(), rows, n_rows, out.data());
        return;
    }
#endif
    scalar::squared_distances(query.data(), query.size(), rows, n_rows, out.data());
}

void squared_distances(std::span<const double> query, const double* rows, std::size_t n_rows, std::span<double> out) {
    squared_distances(active_level(), query, rows, n_rows, out);
}

}  // namespace psl::simd
