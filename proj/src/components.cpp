#include "riverbank/components.hpp"

#include <algorithm>

namespace riverbank {

ComponentLabeling connected_components(const BinaryMask& mask, Connectivity conn) {
    ComponentLabeling out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(mask.size(), 0);

    static const int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
    const int ndirs = conn == Connectivity::Four ? 4 : 8;

    std::vector<std::int64_t> stack;
    std::int32_t next_label = 0;

    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const std::int64_t idx = static_cast<std::int64_t>(y) * mask.width + x;
            if (mask.data[idx] == 0 || out.labels[idx] != 0) continue;

            ++next_label;
            Component comp;
            comp.label = next_label;
            comp.min_x = comp.max_x = x;
            comp.min_y = comp.max_y = y;

            out.labels[idx] = next_label;
            stack.clear();
            stack.push_back(idx);
            while (!stack.empty()) {
                const std::int64_t cur = stack.back();
                stack.pop_back();
                const int cx = static_cast<int>(cur % mask.width);
                const int cy = static_cast<int>(cur / mask.width);
                ++comp.pixel_count;
                comp.min_x = std::min(comp.min_x, cx);
                comp.max_x = std::max(comp.max_x, cx);
                comp.min_y = std::min(comp.min_y, cy);
                comp.max_y = std::max(comp.max_y, cy);

                for (int d = 0; d < ndirs; ++d) {
                    const int nx = cx + dx8[d];
                    const int ny = cy + dy8[d];
                    if (!mask.in_bounds(nx, ny)) continue;
                    const std::int64_t nidx = static_cast<std::int64_t>(ny) * mask.width + nx;
                    if (mask.data[nidx] == 1 && out.labels[nidx] == 0) {
                        out.labels[nidx] = next_label;
                        stack.push_back(nidx);
                    }
                }
            }
            out.components.push_back(comp);
        }
    }
    return out;
}

BinaryMask filter_min_area(const BinaryMask& mask, std::int64_t min_px, Connectivity conn) {
    if (min_px <= 0) return mask;
    const ComponentLabeling lab = connected_components(mask, conn);

    std::vector<std::uint8_t> keep(lab.components.size() + 1, 0);
    for (const Component& c : lab.components)
        keep[static_cast<std::size_t>(c.label)] = c.pixel_count >= min_px ? 1 : 0;

    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.size(); ++i)
        out.data[i] = lab.labels[i] != 0 ? keep[static_cast<std::size_t>(lab.labels[i])] : 0;
    return out;
}

}  // namespace riverbank
