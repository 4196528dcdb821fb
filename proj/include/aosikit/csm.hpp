#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "aosikit/asymmetry.hpp"
#include "aosikit/types.hpp"

// Cloud-system body-pose search over binary foreground masks.
//
// Each body part is a tri-valued cloud (object / background / uncertainty)
// built from a labeled initial mask by eroding and dilating the part region
// with a square structuring element of radius rho: the uncertainty band is
// where the silhouette boundary may move. Parts hang off a tree rooted at
// the torso; the search places the torso over a translation x rotation x
// scale grid and each child over rotation x scale about its already-placed
// parent joint, maximizing a per-part delineation score. The stickman
// joints mapped through the composed transforms give a Skeleton2D per frame.

namespace aosikit::csm {

template <typename T>
struct Grid2D {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Grid2D() = default;
    Grid2D(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
};

using Mask = Grid2D<std::uint8_t>;       // 0 background, 1 foreground
using LabelGrid = Grid2D<std::uint8_t>;  // 0 background, 1..10 part labels

enum class PartId {
    torso = 0, head, l_upper_arm, l_forearm, r_upper_arm, r_forearm,
    l_thigh, l_shank, r_thigh, r_shank,
};
inline constexpr int kPartCount = 10;

const char* part_name(PartId id);
// PGM palette: torso=1, head=2, l_upper_arm=3, l_forearm=4, r_upper_arm=5,
// r_forearm=6, l_thigh=7, l_shank=8, r_thigh=9, r_shank=10.
inline std::uint8_t part_label(PartId id) {
    return static_cast<std::uint8_t>(static_cast<int>(id) + 1);
}
std::optional<PartId> part_from_label(std::uint8_t label);

struct PartSpec {
    PartId id;
    int parent;  // index into the part table, -1 for the root
    gait::Joint proximal;
    gait::Joint distal;
};
const std::array<PartSpec, kPartCount>& part_tree();

enum class CloudValue : std::uint8_t { background = 0, object = 1, uncertainty = 2 };

// Internal grid refinement: band pixels carry the label-map prediction of
// what the observed mask should contain there. The inner half of the band
// (this part's region) predicts foreground; the outer half predicts
// whatever the whole-body label map holds, so bands overlapping adjacent
// parts are not penalized at the true placement.
inline constexpr std::uint8_t kCloudBackground = 0;
inline constexpr std::uint8_t kCloudObject = 1;      // core, predicts foreground
inline constexpr std::uint8_t kCloudInnerBand = 2;   // predicts foreground
inline constexpr std::uint8_t kCloudOuterBandFg = 3; // another part, predicts foreground
inline constexpr std::uint8_t kCloudOuterBandBg = 4; // predicts background

struct CloudImage {
    Grid2D<std::uint8_t> grid;  // kCloud* values
    Point2D anchor;             // proximal joint, model coordinates
    int min_x = 0, min_y = 0, max_x = -1, max_y = -1;  // support bounding box

    CloudValue value_at(int x, int y) const {
        if (!grid.in_bounds(x, y))
            return CloudValue::background;
        const std::uint8_t v = grid.at(x, y);
        if (v == kCloudObject) return CloudValue::object;
        if (v == kCloudBackground) return CloudValue::background;
        return CloudValue::uncertainty;
    }
};

struct CloudSystemModel {
    LabelGrid labels;         // the initial labeled mask the model was built from
    gait::Skeleton2D stickman;  // model-coordinate joints
    std::array<CloudImage, kPartCount> clouds;
    int rho = 3;
};

struct PartTransform {
    double rotation_deg = 0.0;
    double scale = 1.0;
    Point2D translation{0.0, 0.0};  // root only
};

// Similarity about a part's proximal joint: world = anchor_world +
// scale * R(rotation) * (model - anchor_model).
struct Placement {
    Point2D anchor_model{};
    Point2D anchor_world{};
    double rotation_deg = 0.0;
    double scale = 1.0;

    Point2D apply(Point2D m) const;
    Point2D invert(Point2D w) const;
};

struct PoseState {
    std::array<Placement, kPartCount> placements{};
};

struct SearchGrids {
    double t_max = 10.0;
    double t_step = 1.0;
    double r_max = 30.0;
    double r_step = 5.0;
    std::vector<double> scales{0.9, 1.0, 1.1};

    std::vector<double> translation_offsets() const;  // -t_max .. t_max
    std::vector<double> rotation_offsets() const;     // -r_max .. r_max
};

struct CsmConfig {
    SearchGrids grids;
    int rho = 3;
};

struct PoseSearchResult {
    std::array<PartTransform, kPartCount> transforms{};
    std::array<double, kPartCount> part_scores{};
    double score = 0.0;  // mean of part scores
    PoseState pose;
    gait::Skeleton2D skeleton;
    bool held = false;  // empty frame, previous pose carried over
};

// Square-structuring-element binary morphology (Chebyshev radius).
Mask erode(const Mask& in, int radius);
Mask dilate(const Mask& in, int radius);

// Tri-valued cloud for one part: object = region eroded by rho, uncertainty
// = dilated-minus-eroded band, background elsewhere. Throws EmptyPart /
// DegenerateCloud.
CloudImage build_cloud(const LabelGrid& labels, PartId part, int rho, Point2D anchor);

// Clouds for all ten parts plus the fixed torso-rooted tree. Throws
// MissingPart / JointOutsidePart.
CloudSystemModel build_csm(const LabelGrid& labels, const gait::Skeleton2D& stickman,
                           int rho = 3);

// Agreement of the placed cloud with the observed mask, in [0, 1]: the
// fraction of support pixels whose predicted occupancy matches the observed
// mask; 0 when the object core misses the foreground entirely. Exactly 1.0
// at identity on the foreground of the mask the model was built from.
double delineation_score(const CloudImage& cloud, const Placement& placement,
                         const Mask& observed);

// World placements for a full set of part transforms (root translation +
// rotation/scale, children rotation/scale about the parent joint; child
// rotations and scales compose down the tree).
PoseState compose(const CloudSystemModel& csm,
                  const std::array<PartTransform, kPartCount>& transforms);

// Stickman joints mapped through composed placements.
gait::Skeleton2D map_skeleton(const CloudSystemModel& csm, const PoseState& pose);

// Greedy depth-first grid search. Root grids are centered on `prediction`;
// children search their local grids around neutral. Ties break toward the
// smallest (|translation|, |rotation|, |scale-1|), then by raw parameter
// values. Throws EmptyMask.
PoseSearchResult search_pose(const CloudSystemModel& csm, const Mask& observed,
                             const PartTransform& prediction = {},
                             const CsmConfig& cfg = {});

struct Correction {
    LabelGrid labels;
    gait::Skeleton2D stickman;
};

// Frame-by-frame tracking: frame 0 searches around identity, later frames
// around the previous root transform shifted by the foreground-centroid
// displacement. Empty frames hold the previous pose (flagged); a correction
// rebuilds the model at its frame. Throws EmptyMask if the first frame is
// empty.
std::vector<PoseSearchResult> track_sequence(const CloudSystemModel& csm,
                                             std::span<const Mask> masks,
                                             const CsmConfig& cfg = {},
                                             const std::map<int, Correction>& corrections = {});

// Binary silhouette of the model under the given placements.
Mask render_silhouette(const CloudSystemModel& csm, const PoseState& pose,
                       int width, int height);

// Mean of the foreground pixel coordinates.
std::optional<Point2D> foreground_centroid(const Mask& mask);

}  // namespace aosikit::csm
