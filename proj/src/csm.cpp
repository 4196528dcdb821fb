#include "aosikit/csm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aosikit::csm {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

constexpr const char* kPartNames[kPartCount] = {
    "torso", "head", "l_upper_arm", "l_forearm", "r_upper_arm",
    "r_forearm", "l_thigh", "l_shank", "r_thigh", "r_shank",
};

using gait::Joint;

constexpr std::array<PartSpec, kPartCount> kTree = {{
    {PartId::torso, -1, Joint::pelvis, Joint::neck},
    {PartId::head, 0, Joint::neck, Joint::head},
    {PartId::l_upper_arm, 0, Joint::l_shoulder, Joint::l_elbow},
    {PartId::l_forearm, 2, Joint::l_elbow, Joint::l_wrist},
    {PartId::r_upper_arm, 0, Joint::r_shoulder, Joint::r_elbow},
    {PartId::r_forearm, 4, Joint::r_elbow, Joint::r_wrist},
    {PartId::l_thigh, 0, Joint::l_hip, Joint::l_knee},
    {PartId::l_shank, 6, Joint::l_knee, Joint::l_ankle},
    {PartId::r_thigh, 0, Joint::r_hip, Joint::r_knee},
    {PartId::r_shank, 8, Joint::r_knee, Joint::r_ankle},
}};

// Joints rigid with the torso (the root maps these, limbs map their distals).
constexpr Joint kTorsoJoints[] = {Joint::pelvis,     Joint::neck,
                                  Joint::l_shoulder, Joint::r_shoulder,
                                  Joint::l_hip,      Joint::r_hip};

struct Counts {
    long long num = 0;
    long long den = 1;
};

// Candidate ordering for ties: smallest translation, then rotation, then
// scale deviation, then raw values. Total so parallel and serial reductions
// agree.
struct CandKey {
    double t2, rot_abs, scale_dev, tx, ty, rot, scale;
};

CandKey make_key(const PartTransform& t) {
    return {t.translation.x * t.translation.x + t.translation.y * t.translation.y,
            std::abs(t.rotation_deg),
            std::abs(t.scale - 1.0),
            t.translation.x,
            t.translation.y,
            t.rotation_deg,
            t.scale};
}

bool key_less(const CandKey& a, const CandKey& b) {
    if (a.t2 != b.t2) return a.t2 < b.t2;
    if (a.rot_abs != b.rot_abs) return a.rot_abs < b.rot_abs;
    if (a.scale_dev != b.scale_dev) return a.scale_dev < b.scale_dev;
    if (a.tx != b.tx) return a.tx < b.tx;
    if (a.ty != b.ty) return a.ty < b.ty;
    if (a.rot != b.rot) return a.rot < b.rot;
    return a.scale < b.scale;
}

// Exact rational comparison of num/den scores.
bool better(const Counts& c, const CandKey& k, const Counts& best, const CandKey& best_k) {
    const long long lhs = c.num * best.den;
    const long long rhs = best.num * c.den;
    if (lhs != rhs)
        return lhs > rhs;
    return key_less(k, best_k);
}

Counts score_counts(const CloudImage& cloud, const Placement& placement,
                    const Mask& observed) {
    Counts out{0, 1};
    if (cloud.max_x < cloud.min_x)
        return out;

    const Point2D corners[4] = {
        placement.apply({cloud.min_x - 0.5, cloud.min_y - 0.5}),
        placement.apply({cloud.max_x + 0.5, cloud.min_y - 0.5}),
        placement.apply({cloud.min_x - 0.5, cloud.max_y + 0.5}),
        placement.apply({cloud.max_x + 0.5, cloud.max_y + 0.5}),
    };
    double wx0 = corners[0].x, wx1 = corners[0].x;
    double wy0 = corners[0].y, wy1 = corners[0].y;
    for (const auto& c : corners) {
        wx0 = std::min(wx0, c.x);
        wx1 = std::max(wx1, c.x);
        wy0 = std::min(wy0, c.y);
        wy1 = std::max(wy1, c.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(wx0)));
    const int x1 = std::min(observed.width - 1, static_cast<int>(std::ceil(wx1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(wy0)));
    const int y1 = std::min(observed.height - 1, static_cast<int>(std::ceil(wy1)));
    if (x0 > x1 || y0 > y1)
        return out;

    long long num = 0, den = 0, object_fg = 0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const Point2D m = placement.invert({static_cast<double>(x),
                                                static_cast<double>(y)});
            const int mx = static_cast<int>(std::llround(m.x));
            const int my = static_cast<int>(std::llround(m.y));
            if (!cloud.grid.in_bounds(mx, my))
                continue;
            const std::uint8_t v = cloud.grid.at(mx, my);
            if (v == kCloudBackground)
                continue;
            const bool fg = observed.at(x, y) != 0;
            const bool predicted_fg = v != kCloudOuterBandBg;
            ++den;
            if (fg == predicted_fg)
                ++num;
            if (v == kCloudObject && fg)
                ++object_fg;
        }
    }
    if (object_fg == 0 || den == 0)
        return {0, 1};
    return {num, den};
}

Mask part_region(const LabelGrid& labels, PartId part) {
    Mask region(labels.width, labels.height, 0);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x)
            if (labels.at(x, y) == part_label(part))
                region.at(x, y) = 1;
    return region;
}

bool mask_empty(const Mask& m) {
    return std::none_of(m.data.begin(), m.data.end(), [](std::uint8_t v) { return v != 0; });
}

CloudImage make_cloud(const Mask& region, const LabelGrid& labels, int rho,
                      Point2D anchor) {
    const Mask core = erode(region, rho);
    if (mask_empty(core))
        throw DegenerateCloud("erosion radius " + std::to_string(rho) +
                              " empties the part region");
    const Mask dil = dilate(region, rho);

    CloudImage out;
    out.anchor = anchor;
    out.grid = Grid2D<std::uint8_t>(region.width, region.height, kCloudBackground);
    out.min_x = region.width;
    out.min_y = region.height;
    out.max_x = -1;
    out.max_y = -1;
    for (int y = 0; y < region.height; ++y) {
        for (int x = 0; x < region.width; ++x) {
            std::uint8_t v = kCloudBackground;
            if (core.at(x, y))
                v = kCloudObject;
            else if (region.at(x, y))
                v = kCloudInnerBand;
            else if (dil.at(x, y))
                v = labels.at(x, y) != 0 ? kCloudOuterBandFg : kCloudOuterBandBg;
            if (v != kCloudBackground) {
                out.grid.at(x, y) = v;
                out.min_x = std::min(out.min_x, x);
                out.min_y = std::min(out.min_y, y);
                out.max_x = std::max(out.max_x, x);
                out.max_y = std::max(out.max_y, y);
            }
        }
    }
    return out;
}

Placement root_placement(const CloudSystemModel& csm, const PartTransform& t) {
    Placement pl;
    pl.anchor_model = csm.stickman[kTree[0].proximal];
    pl.anchor_world = pl.anchor_model + t.translation;
    pl.rotation_deg = t.rotation_deg;
    pl.scale = t.scale;
    return pl;
}

Placement child_placement(const CloudSystemModel& csm, int part_index,
                          const Placement& parent, const PartTransform& t) {
    Placement pl;
    pl.anchor_model = csm.stickman[kTree[part_index].proximal];
    pl.anchor_world = parent.apply(pl.anchor_model);
    pl.rotation_deg = parent.rotation_deg + t.rotation_deg;
    pl.scale = parent.scale * t.scale;
    return pl;
}

}  // namespace

const char* part_name(PartId id) { return kPartNames[static_cast<int>(id)]; }

std::optional<PartId> part_from_label(std::uint8_t label) {
    if (label >= 1 && label <= kPartCount)
        return static_cast<PartId>(label - 1);
    return std::nullopt;
}

const std::array<PartSpec, kPartCount>& part_tree() { return kTree; }

Point2D Placement::apply(Point2D m) const {
    const double rad = rotation_deg * kDegToRad;
    const double c = std::cos(rad), s = std::sin(rad);
    const double dx = m.x - anchor_model.x;
    const double dy = m.y - anchor_model.y;
    return {anchor_world.x + scale * (c * dx - s * dy),
            anchor_world.y + scale * (s * dx + c * dy)};
}

Point2D Placement::invert(Point2D w) const {
    const double rad = rotation_deg * kDegToRad;
    const double c = std::cos(rad), s = std::sin(rad);
    const double dx = (w.x - anchor_world.x) / scale;
    const double dy = (w.y - anchor_world.y) / scale;
    return {anchor_model.x + c * dx + s * dy,
            anchor_model.y + -s * dx + c * dy};
}

std::vector<double> SearchGrids::translation_offsets() const {
    std::vector<double> out;
    const int n = static_cast<int>(std::floor(2.0 * t_max / t_step + 0.5));
    for (int i = 0; i <= n; ++i)
        out.push_back(-t_max + i * t_step);
    return out;
}

std::vector<double> SearchGrids::rotation_offsets() const {
    std::vector<double> out;
    const int n = static_cast<int>(std::floor(2.0 * r_max / r_step + 0.5));
    for (int i = 0; i <= n; ++i)
        out.push_back(-r_max + i * r_step);
    return out;
}

Mask erode(const Mask& in, int radius) {
    if (radius < 0)
        throw Error("negative morphology radius");
    if (radius == 0)
        return in;
    Mask tmp(in.width, in.height, 0), out(in.width, in.height, 0);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            std::uint8_t v = 1;
            for (int dx = -radius; dx <= radius && v; ++dx) {
                const int xx = x + dx;
                if (xx < 0 || xx >= in.width || !in.at(xx, y))
                    v = 0;
            }
            tmp.at(x, y) = v;
        }
    }
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            std::uint8_t v = 1;
            for (int dy = -radius; dy <= radius && v; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= in.height || !tmp.at(x, yy))
                    v = 0;
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

Mask dilate(const Mask& in, int radius) {
    if (radius < 0)
        throw Error("negative morphology radius");
    if (radius == 0)
        return in;
    Mask tmp(in.width, in.height, 0), out(in.width, in.height, 0);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            std::uint8_t v = 0;
            for (int dx = -radius; dx <= radius && !v; ++dx) {
                const int xx = x + dx;
                if (xx >= 0 && xx < in.width && in.at(xx, y))
                    v = 1;
            }
            tmp.at(x, y) = v;
        }
    }
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            std::uint8_t v = 0;
            for (int dy = -radius; dy <= radius && !v; ++dy) {
                const int yy = y + dy;
                if (yy >= 0 && yy < in.height && tmp.at(x, yy))
                    v = 1;
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

CloudImage build_cloud(const LabelGrid& labels, PartId part, int rho, Point2D anchor) {
    const Mask region = part_region(labels, part);
    if (mask_empty(region))
        throw EmptyPart(std::string("no pixels labeled ") + part_name(part));
    return make_cloud(region, labels, rho, anchor);
}

CloudSystemModel build_csm(const LabelGrid& labels, const gait::Skeleton2D& stickman,
                           int rho) {
    CloudSystemModel out;
    out.labels = labels;
    out.stickman = stickman;
    out.rho = rho;

    std::array<Mask, kPartCount> regions;
    for (int i = 0; i < kPartCount; ++i) {
        regions[i] = part_region(labels, kTree[i].id);
        if (mask_empty(regions[i]))
            throw MissingPart(std::string("no pixels labeled ") + part_name(kTree[i].id));
    }

    // A joint sits on the boundary between the parts attached to it; in a
    // single-label mask the pixel under it belongs to exactly one of them.
    // Validate each joint against the union of its attached regions, with a
    // small collar.
    auto check_joint = [&](Joint j, int part_index) {
        const Point2D p = stickman[j];
        const int x = static_cast<int>(std::llround(p.x));
        const int y = static_cast<int>(std::llround(p.y));
        const int collar = std::max(rho, 2);

        Mask joined = regions[part_index];
        const PartSpec& spec = kTree[part_index];
        if (j == spec.proximal && spec.parent >= 0) {
            for (std::size_t k = 0; k < joined.data.size(); ++k)
                joined.data[k] |= regions[spec.parent].data[k];
        }
        for (int c = 0; c < kPartCount; ++c)
            if (kTree[c].parent == part_index && kTree[c].proximal == j)
                for (std::size_t k = 0; k < joined.data.size(); ++k)
                    joined.data[k] |= regions[c].data[k];

        const Mask allowed = dilate(joined, collar);
        if (!allowed.in_bounds(x, y) || !allowed.at(x, y))
            throw JointOutsidePart(std::string(gait::joint_name(j)) +
                                   " lies outside part " + part_name(spec.id));
    };

    for (int i = 0; i < kPartCount; ++i) {
        check_joint(kTree[i].proximal, i);
        check_joint(kTree[i].distal, i);
        out.clouds[i] = make_cloud(regions[i], labels, rho, stickman[kTree[i].proximal]);
    }
    return out;
}

double delineation_score(const CloudImage& cloud, const Placement& placement,
                         const Mask& observed) {
    const Counts c = score_counts(cloud, placement, observed);
    return static_cast<double>(c.num) / static_cast<double>(c.den);
}

PoseState compose(const CloudSystemModel& csm,
                  const std::array<PartTransform, kPartCount>& transforms) {
    PoseState out;
    for (int i = 0; i < kPartCount; ++i) {
        if (kTree[i].parent < 0)
            out.placements[i] = root_placement(csm, transforms[i]);
        else
            out.placements[i] = child_placement(csm, i, out.placements[kTree[i].parent],
                                                transforms[i]);
    }
    return out;
}

gait::Skeleton2D map_skeleton(const CloudSystemModel& csm, const PoseState& pose) {
    gait::Skeleton2D out;
    for (Joint j : kTorsoJoints)
        out[j] = pose.placements[0].apply(csm.stickman[j]);
    for (int i = 1; i < kPartCount; ++i)
        out[kTree[i].distal] = pose.placements[i].apply(csm.stickman[kTree[i].distal]);
    return out;
}

PoseSearchResult search_pose(const CloudSystemModel& csm, const Mask& observed,
                             const PartTransform& prediction, const CsmConfig& cfg) {
    if (mask_empty(observed))
        throw EmptyMask("observed mask has no foreground");

    const auto t_offsets = cfg.grids.translation_offsets();
    const auto r_offsets = cfg.grids.rotation_offsets();

    PoseSearchResult out;
    for (int i = 0; i < kPartCount; ++i) {
        Counts best_counts{-1, 1};
        CandKey best_key{};
        PartTransform best_t;
        Placement best_pl;

        auto consider = [&](const PartTransform& cand, const Placement& pl) {
            const Counts c = score_counts(csm.clouds[i], pl, observed);
            const CandKey k = make_key(cand);
            if (best_counts.num < 0 || better(c, k, best_counts, best_key)) {
                best_counts = c;
                best_key = k;
                best_t = cand;
                best_pl = pl;
            }
        };

        if (kTree[i].parent < 0) {
            for (double dy : t_offsets) {
                for (double dx : t_offsets) {
                    for (double dr : r_offsets) {
                        for (double s : cfg.grids.scales) {
                            PartTransform cand;
                            cand.translation = {prediction.translation.x + dx,
                                                prediction.translation.y + dy};
                            cand.rotation_deg = prediction.rotation_deg + dr;
                            cand.scale = prediction.scale * s;
                            consider(cand, root_placement(csm, cand));
                        }
                    }
                }
            }
        } else {
            const Placement& parent = out.pose.placements[kTree[i].parent];
            for (double dr : r_offsets) {
                for (double s : cfg.grids.scales) {
                    PartTransform cand;
                    cand.rotation_deg = dr;
                    cand.scale = s;
                    consider(cand, child_placement(csm, i, parent, cand));
                }
            }
        }
        out.transforms[i] = best_t;
        out.pose.placements[i] = best_pl;
        out.part_scores[i] =
            static_cast<double>(best_counts.num) / static_cast<double>(best_counts.den);
    }

    double total = 0.0;
    for (double s : out.part_scores)
        total += s;
    out.score = total / kPartCount;
    out.skeleton = map_skeleton(csm, out.pose);
    return out;
}

std::optional<Point2D> foreground_centroid(const Mask& mask) {
    double sx = 0, sy = 0;
    long long count = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) {
                sx += x;
                sy += y;
                ++count;
            }
        }
    }
    if (count == 0)
        return std::nullopt;
    return Point2D{sx / count, sy / count};
}

std::vector<PoseSearchResult> track_sequence(const CloudSystemModel& csm,
                                             std::span<const Mask> masks,
                                             const CsmConfig& cfg,
                                             const std::map<int, Correction>& corrections) {
    if (masks.empty())
        throw EmptyMask("no mask frames");

    const CloudSystemModel* model = &csm;
    CloudSystemModel corrected;
    std::vector<PoseSearchResult> out;
    out.reserve(masks.size());

    PartTransform prev_root;
    std::optional<Point2D> prev_centroid;

    for (std::size_t t = 0; t < masks.size(); ++t) {
        if (auto it = corrections.find(static_cast<int>(t)); it != corrections.end()) {
            corrected = build_csm(it->second.labels, it->second.stickman, cfg.rho);
            model = &corrected;
            prev_root = {};
            prev_centroid.reset();
        }

        const auto centroid = foreground_centroid(masks[t]);
        if (!centroid) {
            if (out.empty())
                throw EmptyMask("first frame has no foreground");
            PoseSearchResult held = out.back();
            held.held = true;
            out.push_back(std::move(held));
            continue;
        }

        PartTransform prediction = prev_root;
        if (prev_centroid)
            prediction.translation = prediction.translation + (*centroid - *prev_centroid);

        out.push_back(search_pose(*model, masks[t], prediction, cfg));
        prev_root = out.back().transforms[0];
        prev_centroid = centroid;
    }
    return out;
}

Mask render_silhouette(const CloudSystemModel& csm, const PoseState& pose,
                       int width, int height) {
    Mask out(width, height, 0);
    for (int i = 0; i < kPartCount; ++i) {
        const CloudImage& cloud = csm.clouds[i];
        if (cloud.max_x < cloud.min_x)
            continue;
        const Placement& pl = pose.placements[i];
        const Point2D corners[4] = {
            pl.apply({cloud.min_x - 0.5, cloud.min_y - 0.5}),
            pl.apply({cloud.max_x + 0.5, cloud.min_y - 0.5}),
            pl.apply({cloud.min_x - 0.5, cloud.max_y + 0.5}),
            pl.apply({cloud.max_x + 0.5, cloud.max_y + 0.5}),
        };
        double wx0 = corners[0].x, wx1 = corners[0].x;
        double wy0 = corners[0].y, wy1 = corners[0].y;
        for (const auto& c : corners) {
            wx0 = std::min(wx0, c.x);
            wx1 = std::max(wx1, c.x);
            wy0 = std::min(wy0, c.y);
            wy1 = std::max(wy1, c.y);
        }
        const int x0 = std::max(0, static_cast<int>(std::floor(wx0)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(wx1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(wy0)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(wy1)));
        const std::uint8_t label = part_label(kTree[i].id);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (out.at(x, y))
                    continue;
                const Point2D m = pl.invert({static_cast<double>(x),
                                             static_cast<double>(y)});
                const int mx = static_cast<int>(std::llround(m.x));
                const int my = static_cast<int>(std::llround(m.y));
                if (csm.labels.in_bounds(mx, my) && csm.labels.at(mx, my) == label)
                    out.at(x, y) = 1;
            }
        }
    }
    return out;
}

}  // namespace aosikit::csm
