#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aosikit/head_geometry.hpp"
#include "aosikit/types.hpp"

// Tracker/detector fusion. Tracker boxes are validated against detector
// boxes every frame; two consecutive failures recenter the tracked box on
// the detector box (size unchanged). The right eye is not tracked, only
// detected inside a search area mirrored from the left eye through the nose.

namespace aosikit::fusion {

enum class Feature { left_ear = 0, left_eye = 1, nose = 2, right_eye = 3 };

const char* feature_name(Feature f);
std::optional<Feature> feature_from_name(const std::string& name);

struct FeatureObservation {
    std::optional<Box2D> tracker_box;
    std::optional<Box2D> detector_box;
    double detector_score = 0.0;
};

struct FrameObservations {
    int frame_index = 0;
    // indexed by Feature; right_eye optional, the rest mandatory
    std::array<std::optional<FeatureObservation>, 4> features;

    std::optional<FeatureObservation>& operator[](Feature f) {
        return features[static_cast<int>(f)];
    }
    const std::optional<FeatureObservation>& operator[](Feature f) const {
        return features[static_cast<int>(f)];
    }
};

struct ResetEvent {
    int frame = 0;
    Feature feature = Feature::left_ear;
};

struct FusionConfig {
    double detector_score_min = 0.0;      // lenient threshold, signed margin
    double right_eye_search_scale = 1.5;  // search box size vs left-eye box
};

struct FusionState {
    std::array<int, 3> consecutive_failures{};        // left_ear, left_eye, nose
    std::array<std::optional<Box2D>, 3> current_box;  // last accepted boxes
    std::vector<ResetEvent> reset_events;
};

// True iff the tracker box center lies inside the detector box (boundary
// inclusive).
bool validate(const Box2D& tracker_box, const Box2D& detector_box);

// Left eye must be higher and to the left of the nose (y-down coordinates).
bool geometric_constraints_ok(const Box2D& left_eye, const Box2D& nose);

struct SearchArea {
    Box2D box;
    bool degenerate = false;  // eye and nose centers coincide
};

// Right-eye search box: the left-eye center mirrored through the nose,
// sized scale x the left-eye box.
SearchArea right_eye_search_area(const Box2D& left_eye, const Box2D& nose,
                                 double scale = 1.5);

struct StepResult {
    head::LandmarkFrame frame;
    bool constraints_ok = true;           // left-eye/nose geometric constraints
    bool search_area_degenerate = false;  // right-eye search box had zero offset
};

// Advance the per-feature state machine by one frame and assemble the fused
// landmark frame. Throws MissingMandatoryFeature if ear/eye/nose is absent.
StepResult step(FusionState& state, const FrameObservations& obs,
                const FusionConfig& cfg = {});

struct FusionRun {
    std::vector<StepResult> frames;
    std::vector<ResetEvent> resets;
};

FusionRun run(std::span<const FrameObservations> frames, const FusionConfig& cfg = {});

}  // namespace aosikit::fusion
