#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aosikit/types.hpp"

// Head-motion signals from tracked facial features.
//
// Yaw: the left ear (S), left eye (R) and nose (Q) form a triangle whose
// shape flattens as the head turns. Two projection ratios are combined
// into a normalized value in [-1, 1] (-1 = looking fully left, +1 = fully
// right). Pitch: vertical coordinates of eye and nose relative to the ear
// are differenced over a 2-frame gap and accumulated; up is positive.

namespace aosikit::head {

struct LandmarkFrame {
    int frame_index = 0;
    Box2D left_ear;
    Box2D left_eye;
    Box2D nose;
    std::optional<Box2D> right_eye;
    bool right_eye_present = false;
};

struct YawRatios {
    double nose_to_eye = 0.0;  // |US| / |QS|
    double eye_to_ear = 0.0;   // |VR| / |RS|
};

struct HeadSignal {
    double fps = 30.0;
    std::vector<double> yaw;        // in [-1, 1]
    std::vector<double> pitch_cum;  // pixels, up-positive
    std::vector<bool> held;         // value carried over from previous valid frame
    std::vector<bool> right_eye_present;

    std::size_t size() const { return yaw.size(); }
};

// Projection ratios of the nose/eye/ear triangle. q = nose, r = left eye,
// s = left ear. Throws DegenerateTriangle if any two points coincide.
YawRatios compute_yaw_ratios(Point2D q, Point2D r, Point2D s);

// Normalized difference (eye_to_ear - nose_to_eye) / (eye_to_ear + nose_to_eye).
// Throws ZeroRatios when both ratios are zero.
double yaw_hat(const YawRatios& ratios);

// Vertical change of eye and nose relative to the ear over exactly two
// frames, sign flipped so that raising the head is positive.
// Throws FrameGapMismatch unless now.frame_index - prev2.frame_index == 2.
double pitch_increment(const LandmarkFrame& now, const LandmarkFrame& prev2);

// Per-frame yaw plus cumulative pitch for a contiguous landmark sequence.
// Frames with a degenerate triangle (or flagged in `invalid`) keep the
// previous valid value and are marked held; pitch increments touching an
// invalid frame are skipped. pitch_cum[0] = pitch_cum[1] = 0.
// Throws TooShort (< 3 frames), AllDegenerate, FrameGapMismatch
// (non-contiguous indices).
HeadSignal head_signal(std::span<const LandmarkFrame> frames, double fps,
                       const std::vector<bool>& invalid = {});

}  // namespace aosikit::head
