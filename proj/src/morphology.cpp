#include "psl/morphology.hpp"

#include <deque>

namespace psl {

namespace {

constexpr int kDx4[4] = {1, -1, 0, 0};
constexpr int kDy4[4] = {0, 0, 1, -1};
constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

ComponentLabels label_components(const BinaryMask& mask, Connectivity connectivity) {
    ComponentLabels out{Grid<int>(mask.width(), mask.height(), 0), 0, {}};
    const int n_dirs = connectivity == Connectivity::Four ? 4 : 8;
    const int* dx = connectivity == Connectivity::Four ? kDx4 : kDx8;
    const int* dy = connectivity == Connectivity::Four ? kDy4 : kDy8;
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y) || out.labels(x, y) != 0) continue;
            const int id = ++out.count;
            std::size_t size = 0;
            out.labels(x, y) = id;
            queue.emplace_back(x, y);
            while (!queue.empty()) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                ++size;
                for (int k = 0; k < n_dirs; ++k) {
                    const int nx = cx + dx[k], ny = cy + dy[k];
                    if (!mask.contains(nx, ny) || !mask(nx, ny) || out.labels(nx, ny) != 0) continue;
                    out.labels(nx, ny) = id;
                    queue.emplace_back(nx, ny);
                }
            }
            out.sizes.push_back(size);
        }
    }
    return out;
}

BinaryMask dilate_cross(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            bool on = mask(x, y) != 0;
            for (int k = 0; k < 4 && !on; ++k) {
                const int nx = x + kDx4[k], ny = y + kDy4[k];
                on = mask.contains(nx, ny) && mask(nx, ny);
            }
            out(x, y) = on ? 1 : 0;
        }
    return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    BinaryMask reached(w, h);
    std::deque<std::pair<int, int>> queue;
    auto seed = [&](int x, int y) {
        if (!mask(x, y) && !reached(x, y)) {
            reached(x, y) = 1;
            queue.emplace_back(x, y);
        }
    };
    for (int x = 0; x < w; ++x) {
        seed(x, 0);
        seed(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        seed(0, y);
        seed(w - 1, y);
    }
    while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        for (int k = 0; k < 4; ++k) {
            const int nx = cx + kDx4[k], ny = cy + kDy4[k];
            if (mask.contains(nx, ny)) seed(nx, ny);
        }
    }
    BinaryMask out(w, h);
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = reached.values()[i] ? 0 : 1;
    return out;
}

BinaryMask largest_component(const BinaryMask& mask) {
    const ComponentLabels comps = label_components(mask, Connectivity::Eight);
    BinaryMask out(mask.width(), mask.height());
    if (comps.count == 0) return out;
    int best = 1;
    for (int id = 2; id <= comps.count; ++id)
        if (comps.sizes[static_cast<std::size_t>(id - 1)] > comps.sizes[static_cast<std::size_t>(best - 1)]) best = id;
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = comps.labels.values()[i] == best ? 1 : 0;
    return out;
}

}  // namespace psl
