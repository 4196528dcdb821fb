#include "aosikit/attention.hpp"

#include <algorithm>
#include <cmath>

namespace aosikit::attention {

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    if (n % 2 == 1)
        return v[n / 2];
    const double hi = v[n / 2];
    const double lo = *std::max_element(v.begin(), v.begin() + n / 2);
    return (lo + hi) / 2.0;
}

// Median over the window_s seconds preceding `frame`; falls back to the
// frame itself when there is no history.
double baseline_before(const std::vector<double>& values, int frame, double fps,
                       double window_s) {
    const int w = std::max(1, static_cast<int>(std::llround(window_s * fps)));
    const int begin = std::max(0, frame - w);
    if (begin >= frame)
        return values[frame];
    return median({values.begin() + begin, values.begin() + frame});
}

// First index t in [from, n) where pred holds for k consecutive frames.
template <typename Pred>
std::optional<int> first_sustained(int from, int n, int k, Pred pred) {
    int run = 0;
    for (int t = from; t < n; ++t) {
        run = pred(t) ? run + 1 : 0;
        if (run >= k)
            return t - k + 1;
    }
    return std::nullopt;
}

void require_task(const TrialAnnotation& ann, Task expected) {
    if (ann.task != expected)
        throw Error(std::string("annotation task is ") + task_name(ann.task) +
                    ", expected " + task_name(expected));
}

void require_in_range(int frame, std::size_t n, const char* what) {
    if (frame < 0 || static_cast<std::size_t>(frame) >= n)
        throw AnnotationOutOfRange(std::string(what) + " frame " +
                                   std::to_string(frame) + " outside signal of " +
                                   std::to_string(n) + " frames");
}

}  // namespace

const char* task_name(Task t) {
    switch (t) {
        case Task::disengagement: return "disengagement";
        case Task::tracking: return "tracking";
        case Task::shared_interest: return "shared_interest";
    }
    return "?";
}

std::optional<Task> task_from_name(const std::string& name) {
    if (name == "disengagement") return Task::disengagement;
    if (name == "tracking") return Task::tracking;
    if (name == "shared_interest") return Task::shared_interest;
    return std::nullopt;
}

const char* interval_label_name(IntervalLabel l) {
    switch (l) {
        case IntervalLabel::right: return "R";
        case IntervalLabel::left: return "L";
        case IntervalLabel::stationary: return "stationary";
    }
    return "?";
}

std::optional<IntervalLabel> interval_label_from_name(const std::string& name) {
    if (name == "R") return IntervalLabel::right;
    if (name == "L") return IntervalLabel::left;
    if (name == "stationary") return IntervalLabel::stationary;
    return std::nullopt;
}

const char* delay_category_name(DelayCategory c) {
    switch (c) {
        case DelayCategory::pass: return "Pass";
        case DelayCategory::delayed: return "Delayed";
        case DelayCategory::stuck: return "Stuck";
        case DelayCategory::no_response: return "NoResponse";
    }
    return "?";
}

const char* tracking_category_name(TrackingCategory c) {
    switch (c) {
        case TrackingCategory::pass: return "Pass";
        case TrackingCategory::interrupted: return "Interrupted";
        case TrackingCategory::partial: return "Partial";
        case TrackingCategory::no_tracking: return "NoTracking";
    }
    return "?";
}

DelayCategory classify_delay(double delay_s) {
    if (delay_s <= 1.0 + 1.0 / 3.0)
        return DelayCategory::pass;
    if (delay_s <= 2.0 + 1.0 / 3.0)
        return DelayCategory::delayed;
    return DelayCategory::stuck;
}

DisengagementResult detect_disengagement(const head::HeadSignal& signal,
                                         const TrialAnnotation& ann,
                                         const DetectionParams& params) {
    require_task(ann, Task::disengagement);
    if (!ann.presentation_frame)
        throw MissingField("presentation_frame");
    if (!ann.target_side)
        throw MissingField("target_side");
    const int n = static_cast<int>(signal.size());
    const int p = *ann.presentation_frame;
    require_in_range(p, signal.size(), "presentation");

    DisengagementResult out;
    out.baseline = baseline_before(signal.yaw, p, signal.fps, params.baseline_window_s);
    const double sign = (*ann.target_side == Side::right) ? 1.0 : -1.0;

    double extreme = 0.0;
    for (int t = p; t < n; ++t)
        extreme = std::max(extreme, sign * (signal.yaw[t] - out.baseline));
    const double delta =
        params.delta_abs ? *params.delta_abs : params.delta_frac * extreme;
    out.threshold = delta;
    if (delta <= 0.0) {
        out.category = DelayCategory::no_response;
        return out;
    }

    const auto arrival = first_sustained(p, n, params.sustain_frames, [&](int t) {
        return sign * (signal.yaw[t] - out.baseline) >= delta;
    });
    if (!arrival) {
        out.category = DelayCategory::no_response;
        return out;
    }
    out.arrival_frame = *arrival;
    out.delay_s = (*arrival - p) / signal.fps;
    out.category = classify_delay(*out.delay_s);
    return out;
}

TrackingResult classify_tracking(const head::HeadSignal& signal,
                                 const TrialAnnotation& ann,
                                 const DetectionParams& params) {
    require_task(ann, Task::tracking);
    if (ann.object_intervals.empty())
        throw MissingField("object_intervals");
    const int n = static_cast<int>(signal.size());
    for (const auto& iv : ann.object_intervals) {
        if (iv.begin < 0 || iv.end > n || iv.begin >= iv.end)
            throw AnnotationOutOfRange("object interval [" + std::to_string(iv.begin) +
                                       ", " + std::to_string(iv.end) + ")");
    }

    std::vector<ObjectInterval> stationary;
    for (const auto& iv : ann.object_intervals)
        if (iv.label == IntervalLabel::stationary)
            stationary.push_back(iv);
    if (stationary.size() < 2)
        throw AnnotationOutOfRange(
            "tracking annotation needs stationary intervals at both extremes");
    const ObjectInterval first_stat = stationary.front();
    const ObjectInterval far_stat = stationary.back();

    // Far side = side label in effect when the object parks at the far extreme.
    std::optional<Side> far_side;
    for (const auto& iv : ann.object_intervals) {
        if (iv.label == IntervalLabel::stationary)
            continue;
        if (iv.begin <= far_stat.begin && far_stat.begin < iv.end)
            far_side = (iv.label == IntervalLabel::right) ? Side::right : Side::left;
    }
    if (!far_side)
        throw AnnotationOutOfRange("no R/L interval covers the far stationary interval");
    const double sign = (*far_side == Side::right) ? 1.0 : -1.0;

    TrackingResult out;
    const double baseline =
        median({signal.yaw.begin() + first_stat.begin, signal.yaw.begin() + first_stat.end});

    double yaw_min = signal.yaw[first_stat.begin], yaw_max = yaw_min;
    for (int t = first_stat.begin; t < n; ++t) {
        yaw_min = std::min(yaw_min, signal.yaw[t]);
        yaw_max = std::max(yaw_max, signal.yaw[t]);
    }

    // The lateral sweep is symmetric, so the expected far extreme is the
    // start-side baseline mirrored across the yaw midline; a child who goes
    // further widens it to the observed extreme. Using the observed extreme
    // alone would make stop-at-midline trials count as arrived.
    const double observed_far = sign > 0 ? yaw_max : yaw_min;
    const double target = sign * std::max(std::abs(baseline), sign * observed_far);
    const double span = std::max({baseline, yaw_max, target}) -
                        std::min({baseline, yaw_min, target});

    // Did the gaze come within eta of the far extreme once the object parked?
    const double eta = params.far_side_frac * span;
    std::optional<int> far_arrival;
    for (int t = far_stat.begin; t < n && !far_arrival; ++t)
        if (sign * (target - signal.yaw[t]) <= eta)
            far_arrival = t;
    out.reached_far_side = far_arrival.has_value();
    if (far_arrival)
        out.arrival_lag_s = (*far_arrival - far_stat.begin) / signal.fps;

    // Plateaus while the object is moving.
    auto moving = [&](int t) {
        if (t < first_stat.end || t >= far_stat.begin)
            return false;
        for (const auto& iv : stationary)
            if (iv.begin <= t && t < iv.end)
                return false;
        return true;
    };
    const int min_frames =
        std::max(2, static_cast<int>(std::ceil(params.pause_min_s * signal.fps)));
    int run_begin = -1;
    auto flush_run = [&](int run_end) {  // run covers [run_begin, run_end)
        if (run_begin >= 0 && run_end - run_begin >= min_frames)
            out.pauses.push_back({run_begin, run_end - run_begin,
                                  (run_end - run_begin) / signal.fps});
        run_begin = -1;
    };
    for (int t = first_stat.end; t < far_stat.begin; ++t) {
        const bool flat = moving(t) && t + 1 < n && moving(t + 1) &&
                          std::abs(signal.yaw[t + 1] - signal.yaw[t]) <= params.plateau_eps;
        if (flat && run_begin < 0)
            run_begin = t;
        if (!flat && run_begin >= 0)
            flush_run(t + (moving(t) ? 1 : 0));
    }
    flush_run(far_stat.begin);

    // Did tracking start at all?
    const double toward = sign * (target - baseline);
    const double delta =
        params.delta_abs ? *params.delta_abs : params.delta_frac * std::max(0.0, toward);
    bool departed = false;
    if (delta > 0.0)
        for (int t = first_stat.end; t < n && !departed; ++t)
            departed = sign * (signal.yaw[t] - baseline) >= delta;

    if (!departed)
        out.category = TrackingCategory::no_tracking;
    else if (!out.reached_far_side)
        out.category = TrackingCategory::partial;
    else if (!out.pauses.empty())
        out.category = TrackingCategory::interrupted;
    else
        out.category = TrackingCategory::pass;
    return out;
}

SharedInterestResult shared_interest_latency(const head::HeadSignal& signal,
                                             const TrialAnnotation& ann,
                                             const DetectionParams& params) {
    require_task(ann, Task::shared_interest);
    if (!ann.contact_frame)
        throw MissingField("contact_frame");
    const int n = static_cast<int>(signal.size());
    const int c = *ann.contact_frame;
    require_in_range(c, signal.size(), "contact");

    SharedInterestResult out;
    out.baseline =
        baseline_before(signal.pitch_cum, c, signal.fps, params.baseline_window_s);

    const int w = std::max(1, static_cast<int>(std::llround(params.baseline_window_s *
                                                            signal.fps)));
    double lo = signal.pitch_cum[std::max(0, c - w)], hi = lo;
    for (int t = std::max(0, c - w); t < n; ++t) {
        lo = std::min(lo, signal.pitch_cum[t]);
        hi = std::max(hi, signal.pitch_cum[t]);
    }
    const double drop = params.pitch_drop_abs ? *params.pitch_drop_abs
                                              : params.pitch_drop_frac * (hi - lo);
    if (drop <= 0.0)
        return out;  // flat signal, no look-down

    const int k = params.sustain_frames;
    const auto onset = first_sustained(c, n, k, [&](int t) {
        return out.baseline - signal.pitch_cum[t] >= drop;
    });
    if (!onset)
        return out;
    out.onset_frame = *onset;

    const auto recovery = first_sustained(*onset + 1, n, k, [&](int t) {
        return signal.pitch_cum[t] >= out.baseline - drop;
    });
    if (!recovery)
        return out;
    out.look_up_frame = *recovery;
    out.look_up_latency_s = (*recovery - c) / signal.fps;
    out.look_down_duration_s = (*recovery - *onset) / signal.fps;
    return out;
}

}  // namespace aosikit::attention
