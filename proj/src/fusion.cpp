#include "aosikit/fusion.hpp"

namespace aosikit::fusion {

const char* feature_name(Feature f) {
    switch (f) {
        case Feature::left_ear: return "left_ear";
        case Feature::left_eye: return "left_eye";
        case Feature::nose: return "nose";
        case Feature::right_eye: return "right_eye";
    }
    return "?";
}

std::optional<Feature> feature_from_name(const std::string& name) {
    if (name == "left_ear") return Feature::left_ear;
    if (name == "left_eye") return Feature::left_eye;
    if (name == "nose") return Feature::nose;
    if (name == "right_eye") return Feature::right_eye;
    return std::nullopt;
}

bool validate(const Box2D& tracker_box, const Box2D& detector_box) {
    return detector_box.contains(tracker_box.center());
}

bool geometric_constraints_ok(const Box2D& left_eye, const Box2D& nose) {
    return left_eye.cy < nose.cy && left_eye.cx < nose.cx;
}

SearchArea right_eye_search_area(const Box2D& left_eye, const Box2D& nose,
                                 double scale) {
    const Point2D offset = nose.center() - left_eye.center();
    SearchArea area;
    area.degenerate = (offset.x == 0.0 && offset.y == 0.0);
    area.box = {nose.cx + offset.x, nose.cy + offset.y,
                scale * left_eye.w, scale * left_eye.h};
    return area;
}

namespace {

// One mandatory feature through the validate/reset machine. Returns the box
// to use for this frame.
Box2D advance_feature(FusionState& state, int idx, int frame_index,
                      const FeatureObservation& obs) {
    auto& failures = state.consecutive_failures[idx];
    auto& current = state.current_box[idx];

    const bool can_validate = obs.tracker_box && obs.detector_box;
    const bool passed = can_validate ? validate(*obs.tracker_box, *obs.detector_box)
                                     : obs.tracker_box.has_value();
    if (passed) {
        failures = 0;
        current = *obs.tracker_box;
        return *current;
    }

    ++failures;
    if (obs.tracker_box)
        current = *obs.tracker_box;
    else if (!current)
        current = *obs.detector_box;
    if (failures >= 2) {
        if (obs.detector_box) {
            current->cx = obs.detector_box->cx;  // recenter, size unchanged
            current->cy = obs.detector_box->cy;
        }
        state.reset_events.push_back({frame_index, static_cast<Feature>(idx)});
        failures = 0;
    }
    return *current;
}

}  // namespace

StepResult step(FusionState& state, const FrameObservations& obs,
                const FusionConfig& cfg) {
    for (int i = 0; i < 3; ++i) {
        if (!obs.features[i] ||
            (!obs.features[i]->tracker_box && !obs.features[i]->detector_box))
            throw MissingMandatoryFeature(
                std::string("missing observation for ") +
                feature_name(static_cast<Feature>(i)) + " at frame " +
                std::to_string(obs.frame_index));
    }

    StepResult out;
    out.frame.frame_index = obs.frame_index;
    out.frame.left_ear = advance_feature(state, 0, obs.frame_index, *obs[Feature::left_ear]);
    out.frame.left_eye = advance_feature(state, 1, obs.frame_index, *obs[Feature::left_eye]);
    out.frame.nose = advance_feature(state, 2, obs.frame_index, *obs[Feature::nose]);

    out.constraints_ok = geometric_constraints_ok(out.frame.left_eye, out.frame.nose);

    const SearchArea area =
        right_eye_search_area(out.frame.left_eye, out.frame.nose, cfg.right_eye_search_scale);
    out.search_area_degenerate = area.degenerate;
    const auto& right = obs[Feature::right_eye];
    if (right && right->detector_box &&
        right->detector_score >= cfg.detector_score_min &&
        area.box.contains(right->detector_box->center())) {
        out.frame.right_eye = *right->detector_box;
        out.frame.right_eye_present = true;
    }
    return out;
}

FusionRun run(std::span<const FrameObservations> frames, const FusionConfig& cfg) {
    FusionState state;
    FusionRun out;
    out.frames.reserve(frames.size());
    for (const auto& f : frames)
        out.frames.push_back(step(state, f, cfg));
    out.resets = state.reset_events;
    return out;
}

}  // namespace aosikit::fusion
