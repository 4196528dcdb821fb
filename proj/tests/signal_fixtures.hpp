#pragma once

#include <vector>

#include "aosikit/attention.hpp"
#include "aosikit/head_geometry.hpp"

// Synthetic signals with event frames placed by construction, shared by the
// unit and acceptance suites.

namespace fixtures {

inline aosikit::head::HeadSignal make_signal(double fps, std::vector<double> yaw,
                                             std::vector<double> pitch = {}) {
    aosikit::head::HeadSignal sig;
    sig.fps = fps;
    if (pitch.empty())
        pitch.assign(yaw.size(), 0.0);
    if (yaw.empty())
        yaw.assign(pitch.size(), 0.0);
    sig.yaw = std::move(yaw);
    sig.pitch_cum = std::move(pitch);
    sig.held.assign(sig.yaw.size(), false);
    sig.right_eye_present.assign(sig.yaw.size(), false);
    return sig;
}

// Flat at 0, stepping to +0.6 at presentation + arrival_offset and staying.
inline aosikit::head::HeadSignal disengagement_step(double fps, int presentation,
                                                    int arrival_offset,
                                                    int tail = 40) {
    std::vector<double> yaw(presentation + arrival_offset + tail, 0.0);
    for (std::size_t t = presentation + arrival_offset; t < yaw.size(); ++t)
        yaw[t] = 0.6;
    return make_signal(fps, std::move(yaw));
}

inline aosikit::attention::TrialAnnotation disengagement_annotation(double fps,
                                                                    int presentation) {
    aosikit::attention::TrialAnnotation ann;
    ann.task = aosikit::attention::Task::disengagement;
    ann.fps = fps;
    ann.presentation_frame = presentation;
    ann.target_side = aosikit::attention::Side::right;
    return ann;
}

// 120-frame lateral sweep: object parked right for [0,30), moving across
// [30,90), parked left for [90,120). Yaw ramps +0.6 -> -0.6 during the
// motion, optionally flattening for pause_frames starting at pause_begin.
inline aosikit::head::HeadSignal tracking_sweep(double fps, int pause_begin = -1,
                                                int pause_frames = 0,
                                                bool stop_at_midline = false) {
    std::vector<double> yaw(120, 0.0);
    for (int t = 0; t < 30; ++t)
        yaw[t] = 0.6;
    double value = 0.6;
    const double slope = 0.02;
    for (int t = 30; t < 90; ++t) {
        // the first paused frame still takes its ramp step, then freezes, so
        // the flat run is exactly pause_frames long
        const bool frozen = pause_begin >= 0 && t > pause_begin &&
                            t < pause_begin + pause_frames;
        if (!frozen && !(stop_at_midline && value <= 0.0))
            value -= slope;
        yaw[t] = value;
    }
    for (int t = 90; t < 120; ++t)
        yaw[t] = stop_at_midline ? yaw[89] : -0.6;
    return make_signal(fps, std::move(yaw));
}

inline aosikit::attention::TrialAnnotation tracking_annotation(double fps) {
    using namespace aosikit::attention;
    TrialAnnotation ann;
    ann.task = Task::tracking;
    ann.fps = fps;
    ann.object_intervals = {
        {IntervalLabel::right, 0, 60},
        {IntervalLabel::left, 60, 120},
        {IntervalLabel::stationary, 0, 30},
        {IntervalLabel::stationary, 90, 120},
    };
    return ann;
}

// Pitch dip of `depth` starting a few frames after contact, recovering to
// baseline exactly at contact + recovery_offset.
inline aosikit::head::HeadSignal ball_dip(double fps, int contact, int recovery_offset,
                                          double depth = 20.0, int tail = 20) {
    std::vector<double> pitch(contact + recovery_offset + tail, 0.0);
    for (int t = contact + 3; t < contact + recovery_offset; ++t)
        pitch[t] = -depth;
    return make_signal(fps, {}, std::move(pitch));
}

inline aosikit::attention::TrialAnnotation ball_annotation(double fps, int contact) {
    aosikit::attention::TrialAnnotation ann;
    ann.task = aosikit::attention::Task::shared_interest;
    ann.fps = fps;
    ann.contact_frame = contact;
    return ann;
}

}  // namespace fixtures
