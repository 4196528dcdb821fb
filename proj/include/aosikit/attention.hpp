#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aosikit/head_geometry.hpp"
#include "aosikit/types.hpp"

// AOSI trial scoring on head-motion signals.
//
// Disengagement: delay between presenting the second object and the first
// sustained yaw excursion toward it; categorized pass / delayed / stuck
// with a +1/3 s margin on the nominal 1 s and 2 s AOSI boundaries.
// Tracking: plateau detection while the object moves plus a did-it-reach-
// the-far-side check. Shared interest: look-down onset and look-up
// recovery on the pitch signal after ball contact.

namespace aosikit::attention {

enum class Task { disengagement, tracking, shared_interest };
enum class Side { left, right };
enum class IntervalLabel { right, left, stationary };

const char* task_name(Task t);
std::optional<Task> task_from_name(const std::string& name);
const char* interval_label_name(IntervalLabel l);
std::optional<IntervalLabel> interval_label_from_name(const std::string& name);

struct ObjectInterval {
    IntervalLabel label = IntervalLabel::stationary;
    int begin = 0;  // inclusive
    int end = 0;    // exclusive
};

struct TrialAnnotation {
    Task task = Task::disengagement;
    double fps = 30.0;
    std::optional<int> presentation_frame;  // disengagement
    std::optional<Side> target_side;        // disengagement
    std::vector<ObjectInterval> object_intervals;  // tracking
    std::optional<int> contact_frame;       // shared interest
};

enum class DelayCategory { pass, delayed, stuck, no_response };
enum class TrackingCategory { pass, interrupted, partial, no_tracking };

const char* delay_category_name(DelayCategory c);
const char* tracking_category_name(TrackingCategory c);

struct DisengagementResult {
    std::optional<double> delay_s;
    DelayCategory category = DelayCategory::no_response;
    std::optional<int> arrival_frame;
    double baseline = 0.0;
    double threshold = 0.0;  // effective delta
};

struct Pause {
    int begin = 0;
    int frames = 0;
    double seconds = 0.0;
};

struct TrackingResult {
    TrackingCategory category = TrackingCategory::no_tracking;
    std::vector<Pause> pauses;  // plateaus lasting at least the pause threshold
    bool reached_far_side = false;
    std::optional<double> arrival_lag_s;

    std::vector<double> pause_durations_s() const {
        std::vector<double> out;
        for (const auto& p : pauses) out.push_back(p.seconds);
        return out;
    }
};

struct SharedInterestResult {
    std::optional<double> look_up_latency_s;
    std::optional<double> look_down_duration_s;
    std::optional<int> onset_frame;
    std::optional<int> look_up_frame;
    double baseline = 0.0;
};

// Event-detection knobs. Fractional thresholds are resolved against the
// observed signal; the optional absolute values override them.
struct DetectionParams {
    double baseline_window_s = 0.5;
    double delta_frac = 0.5;            // of baseline-to-extreme distance
    std::optional<double> delta_abs;    // absolute yaw threshold override
    int sustain_frames = 3;             // k
    double plateau_eps = 0.01;          // max |yaw step| inside a plateau
    double pause_min_s = 1.0 / 3.0;     // p
    double far_side_frac = 0.15;        // eta, of trial yaw range
    double pitch_drop_frac = 0.25;      // delta_p, of pre/post pitch range
    std::optional<double> pitch_drop_abs;
};

// Pass <= 4/3 s, Delayed <= 7/3 s, Stuck above (the AOSI 1 s / 2 s limits
// widened by the 1/3 s live-judgment margin, boundaries inclusive).
DelayCategory classify_delay(double delay_s);

DisengagementResult detect_disengagement(const head::HeadSignal& signal,
                                         const TrialAnnotation& ann,
                                         const DetectionParams& params = {});

TrackingResult classify_tracking(const head::HeadSignal& signal,
                                 const TrialAnnotation& ann,
                                 const DetectionParams& params = {});

SharedInterestResult shared_interest_latency(const head::HeadSignal& signal,
                                             const TrialAnnotation& ann,
                                             const DetectionParams& params = {});

}  // namespace aosikit::attention
