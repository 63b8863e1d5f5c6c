#include "psl/image.hpp"

#include <algorithm>

namespace psl {

std::size_t count_foreground(const BinaryMask& mask) {
    return static_cast<std::size_t>(
        std::count_if(mask.values().begin(), mask.values().end(), [](std::uint8_t v) { return v != 0; }));
}

RasterImage::RasterImage(int width, int height, double fill)
    : width_(width), height_(height), original_width_(width), original_height_(height) {
    if (width < 0 || height < 0) throw InvalidInput("image dimensions must be non-negative");
    samples_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, fill);
}

}  // namespace psl
