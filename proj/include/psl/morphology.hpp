#pragma once

#include <vector>

#include "psl/image.hpp"

namespace psl {

enum class Connectivity { Four = 4, Eight = 8 };

struct ComponentLabels {
    Grid<int> labels;  // 0 = background, 1..count = component id
    int count = 0;
    std::vector<std::size_t> sizes;  // sizes[id - 1]
};

/// Connected components of the foreground.
ComponentLabels label_components(const BinaryMask& mask, Connectivity connectivity);

/// Binary dilation with the 3x3 cross (discrete unit disk).
BinaryMask dilate_cross(const BinaryMask& mask);

/// Fills background regions that cannot be reached from the image border
/// through 4-connected background pixels.
BinaryMask fill_holes(const BinaryMask& mask);

/// Largest 8-connected component (lowest id on ties).
BinaryMask largest_component(const BinaryMask& mask);

}  // namespace psl
