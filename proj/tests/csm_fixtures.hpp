#pragma once

#include <cmath>
#include <random>

#include "aosikit/csm.hpp"

// Synthetic 128x128 stickman: each part rendered as a capsule (thick
// segment) into a labeled grid. Parts are drawn torso-first so limbs own
// the shared boundary pixels. Capsule rasterization is independent of the
// library's morphology.

namespace fixtures {

using aosikit::Point2D;
using aosikit::csm::LabelGrid;
using aosikit::csm::Mask;
using aosikit::gait::Joint;
using aosikit::gait::Skeleton2D;

inline constexpr int kGridSize = 128;

inline Skeleton2D stickman_joints() {
    Skeleton2D sk;
    sk[Joint::pelvis] = {64, 74};
    sk[Joint::neck] = {64, 44};
    sk[Joint::head] = {64, 30};
    sk[Joint::l_shoulder] = {56, 46};
    sk[Joint::l_elbow] = {42, 56};
    sk[Joint::l_wrist] = {30, 68};
    sk[Joint::r_shoulder] = {72, 46};
    sk[Joint::r_elbow] = {86, 56};
    sk[Joint::r_wrist] = {98, 68};
    sk[Joint::l_hip] = {58, 72};
    sk[Joint::l_knee] = {52, 92};
    sk[Joint::l_ankle] = {50, 112};
    sk[Joint::r_hip] = {70, 72};
    sk[Joint::r_knee] = {76, 92};
    sk[Joint::r_ankle] = {78, 112};
    return sk;
}

inline double point_segment_dist(Point2D p, Point2D a, Point2D b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

inline void draw_capsule(LabelGrid& grid, Point2D a, Point2D b, double radius,
                         std::uint8_t label) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
    const int x1 = std::min(grid.width - 1,
                            static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
    const int y1 = std::min(grid.height - 1,
                            static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (point_segment_dist({static_cast<double>(x), static_cast<double>(y)}, a,
                                   b) <= radius)
                grid.at(x, y) = label;
}

inline double part_radius(aosikit::csm::PartId id) {
    using aosikit::csm::PartId;
    switch (id) {
        case PartId::torso: return 10.0;
        case PartId::head: return 6.0;
        default: return 5.0;
    }
}

inline LabelGrid stickman_labels(const Skeleton2D& sk = stickman_joints()) {
    LabelGrid grid(kGridSize, kGridSize, 0);
    for (const auto& part : aosikit::csm::part_tree())
        draw_capsule(grid, sk[part.proximal], sk[part.distal], part_radius(part.id),
                     aosikit::csm::part_label(part.id));
    return grid;
}

inline Mask labels_to_mask(const LabelGrid& labels) {
    Mask mask(labels.width, labels.height, 0);
    for (std::size_t i = 0; i < labels.data.size(); ++i)
        mask.data[i] = labels.data[i] ? 1 : 0;
    return mask;
}

// Random ground-truth transforms drawn from the search grids themselves, so
// recovery can be exact.
inline std::array<aosikit::csm::PartTransform, aosikit::csm::kPartCount>
random_grid_transforms(std::mt19937& rng, const aosikit::csm::SearchGrids& grids,
                       double t_limit = 6.0, double r_limit = 15.0) {
    const auto t_off = grids.translation_offsets();
    const auto r_off = grids.rotation_offsets();
    auto pick = [&](const std::vector<double>& values, double limit) {
        double v;
        do {
            v = values[rng() % values.size()];
        } while (std::abs(v) > limit);
        return v;
    };
    std::array<aosikit::csm::PartTransform, aosikit::csm::kPartCount> out;
    out[0].translation = {pick(t_off, t_limit), pick(t_off, t_limit)};
    out[0].rotation_deg = pick(r_off, r_limit);
    out[0].scale = grids.scales[rng() % grids.scales.size()];
    for (int i = 1; i < aosikit::csm::kPartCount; ++i) {
        out[i].rotation_deg = pick(r_off, r_limit);
        out[i].scale = grids.scales[rng() % grids.scales.size()];
    }
    return out;
}

}  // namespace fixtures
