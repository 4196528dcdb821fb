#include "aosikit/head_geometry.hpp"

#include <algorithm>

namespace aosikit::head {

namespace {

// Foot of the perpendicular from p onto the line through a and b.
Point2D project_onto_line(Point2D p, Point2D a, Point2D b) {
    const Point2D d = b - a;
    const double t = dot(p - a, d) / dot(d, d);
    return a + t * d;
}

double relative_y(const LandmarkFrame& f, const Box2D& feature) {
    return feature.cy - f.left_ear.cy;
}

}  // namespace

YawRatios compute_yaw_ratios(Point2D q, Point2D r, Point2D s) {
    if (q == r || q == s || r == s)
        throw DegenerateTriangle("coincident landmark points");

    const Point2D u = project_onto_line(r, q, s);
    const Point2D v = project_onto_line(q, r, s);
    return {distance(u, s) / distance(q, s), distance(v, r) / distance(r, s)};
}

double yaw_hat(const YawRatios& ratios) {
    const double sum = ratios.eye_to_ear + ratios.nose_to_eye;
    if (sum <= 0.0)
        throw ZeroRatios();
    return (ratios.eye_to_ear - ratios.nose_to_eye) / sum;
}

double pitch_increment(const LandmarkFrame& now, const LandmarkFrame& prev2) {
    if (now.frame_index - prev2.frame_index != 2)
        throw FrameGapMismatch("pitch increment requires a 2-frame gap, got " +
                               std::to_string(now.frame_index - prev2.frame_index));

    double sum = 0.0;
    sum += relative_y(prev2, prev2.left_eye) - relative_y(now, now.left_eye);
    sum += relative_y(prev2, prev2.nose) - relative_y(now, now.nose);
    return sum;
}

HeadSignal head_signal(std::span<const LandmarkFrame> frames, double fps,
                       const std::vector<bool>& invalid) {
    if (frames.size() < 3)
        throw TooShort("head signal needs at least 3 frames, got " +
                       std::to_string(frames.size()));
    for (std::size_t t = 1; t < frames.size(); ++t) {
        if (frames[t].frame_index != frames[t - 1].frame_index + 1)
            throw FrameGapMismatch("landmark frames must be contiguous");
    }

    const std::size_t n = frames.size();
    HeadSignal out;
    out.fps = fps;
    out.yaw.assign(n, 0.0);
    out.pitch_cum.assign(n, 0.0);
    out.held.assign(n, false);
    out.right_eye_present.assign(n, false);

    std::vector<bool> valid(n, true);
    std::size_t first_valid = n;
    double last_yaw = 0.0;

    for (std::size_t t = 0; t < n; ++t) {
        out.right_eye_present[t] = frames[t].right_eye_present;
        if (t < invalid.size() && invalid[t])
            valid[t] = false;
        if (valid[t]) {
            try {
                out.yaw[t] = yaw_hat(compute_yaw_ratios(frames[t].nose.center(),
                                                        frames[t].left_eye.center(),
                                                        frames[t].left_ear.center()));
            } catch (const Error&) {
                valid[t] = false;
            }
        }
        if (valid[t]) {
            if (first_valid == n)
                first_valid = t;
            last_yaw = out.yaw[t];
        } else {
            out.yaw[t] = last_yaw;
            out.held[t] = true;
        }
    }
    if (first_valid == n)
        throw AllDegenerate("no valid landmark triangle in sequence");
    // Leading invalid frames have no previous value; backfill from the first
    // valid one.
    for (std::size_t t = 0; t < first_valid; ++t)
        out.yaw[t] = out.yaw[first_valid];

    // Overlapping 2-frame steps; increments touching an invalid frame are
    // skipped so the accumulated value holds.
    for (std::size_t t = 2; t < n; ++t) {
        double inc = 0.0;
        if (valid[t] && valid[t - 2])
            inc = pitch_increment(frames[t], frames[t - 2]);
        out.pitch_cum[t] = out.pitch_cum[t - 1] + inc;
    }
    return out;
}

}  // namespace aosikit::head
