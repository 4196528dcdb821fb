#include <doctest.h>

#include <array>

#include "aosikit/attention.hpp"
#include "signal_fixtures.hpp"

using namespace aosikit;
using namespace aosikit::attention;

TEST_CASE("classify_delay: category boundaries with the 1/3 s margin") {
    CHECK(classify_delay(0.7) == DelayCategory::pass);
    CHECK(classify_delay(1.33) == DelayCategory::pass);  // inclusive at 4/3
    CHECK(classify_delay(4.0 / 3.0) == DelayCategory::pass);
    CHECK(classify_delay(1.37) == DelayCategory::delayed);
    CHECK(classify_delay(7.0 / 3.0) == DelayCategory::delayed);
    CHECK(classify_delay(2.5) == DelayCategory::stuck);
}

TEST_CASE("classify_delay: monotone step function") {
    DelayCategory prev = classify_delay(0.0);
    for (double d = 0.0; d <= 4.0; d += 0.01) {
        const DelayCategory c = classify_delay(d);
        CHECK(static_cast<int>(c) >= static_cast<int>(prev));
        prev = c;
    }
}

TEST_CASE("classify_delay: reproduces the published delay/score pairs") {
    const std::array<std::pair<double, DelayCategory>, 28> table = {{
        {0.9, DelayCategory::pass},    {0.7, DelayCategory::pass},
        {0.37, DelayCategory::pass},   {0.5, DelayCategory::pass},
        {0.23, DelayCategory::pass},   {1.1, DelayCategory::pass},
        {0.3, DelayCategory::pass},    {0.83, DelayCategory::pass},
        {0.97, DelayCategory::pass},   {1.13, DelayCategory::pass},
        {1.33, DelayCategory::pass},   {1.37, DelayCategory::delayed},
        {0.87, DelayCategory::pass},   {1.3, DelayCategory::pass},
        {1.33, DelayCategory::pass},   {0.83, DelayCategory::pass},
        {0.63, DelayCategory::pass},   {0.87, DelayCategory::pass},
        {0.93, DelayCategory::pass},   {0.9, DelayCategory::pass},
        {0.87, DelayCategory::pass},   {1.87, DelayCategory::delayed},
        {1.07, DelayCategory::pass},   {1.77, DelayCategory::delayed},
        {0.5, DelayCategory::pass},    {1.03, DelayCategory::pass},
        {1.43, DelayCategory::delayed},{0.7, DelayCategory::pass},
    }};
    for (const auto& [delay, expected] : table)
        CHECK(classify_delay(delay) == expected);
}

TEST_CASE("disengagement: 21-frame step gives a 0.7 s pass") {
    const auto sig = fixtures::disengagement_step(30.0, 60, 21);
    const auto res = detect_disengagement(sig, fixtures::disengagement_annotation(30.0, 60));
    REQUIRE(res.delay_s.has_value());
    CHECK(*res.delay_s == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(res.category == DelayCategory::pass);
    CHECK(*res.arrival_frame == 81);
}

TEST_CASE("disengagement: flat signal is NoResponse") {
    const auto sig = fixtures::make_signal(30.0, std::vector<double>(120, 0.2));
    const auto res = detect_disengagement(sig, fixtures::disengagement_annotation(30.0, 60));
    CHECK(res.category == DelayCategory::no_response);
    CHECK_FALSE(res.delay_s.has_value());
}

TEST_CASE("disengagement: short blips do not count as arrival") {
    // crossing held only k-1 frames, then a sustained crossing at +41
    auto sig = fixtures::disengagement_step(30.0, 60, 41);
    sig.yaw[60 + 10] = 0.6;
    sig.yaw[60 + 11] = 0.6;  // two frames only, k = 3
    const auto res = detect_disengagement(sig, fixtures::disengagement_annotation(30.0, 60));
    REQUIRE(res.delay_s.has_value());
    CHECK(*res.delay_s == doctest::Approx(41.0 / 30.0).epsilon(1e-9));
    CHECK(res.category == DelayCategory::delayed);
}

TEST_CASE("disengagement: invariant under constant yaw shifts") {
    auto sig = fixtures::disengagement_step(30.0, 60, 21);
    const auto base = detect_disengagement(sig, fixtures::disengagement_annotation(30.0, 60));
    for (auto& y : sig.yaw)
        y += 0.17;
    const auto moved = detect_disengagement(sig, fixtures::disengagement_annotation(30.0, 60));
    REQUIRE(moved.delay_s.has_value());
    CHECK(*moved.delay_s == doctest::Approx(*base.delay_s));
    CHECK(moved.category == base.category);
}

TEST_CASE("disengagement: looking left works symmetrically") {
    auto sig = fixtures::disengagement_step(30.0, 60, 21);
    for (auto& y : sig.yaw)
        y = -y;
    auto ann = fixtures::disengagement_annotation(30.0, 60);
    ann.target_side = Side::left;
    const auto res = detect_disengagement(sig, ann);
    REQUIRE(res.delay_s.has_value());
    CHECK(*res.delay_s == doctest::Approx(0.7));
    CHECK(res.category == DelayCategory::pass);
}

TEST_CASE("disengagement: annotation validation") {
    const auto sig = fixtures::disengagement_step(30.0, 60, 21);
    auto ann = fixtures::disengagement_annotation(30.0, 500);
    CHECK_THROWS_AS(detect_disengagement(sig, ann), AnnotationOutOfRange);
    ann = fixtures::disengagement_annotation(30.0, 60);
    ann.presentation_frame.reset();
    CHECK_THROWS_AS(detect_disengagement(sig, ann), MissingField);
    ann = fixtures::disengagement_annotation(30.0, 60);
    ann.target_side.reset();
    CHECK_THROWS_AS(detect_disengagement(sig, ann), MissingField);
}

TEST_CASE("tracking: smooth sweep passes") {
    const auto sig = fixtures::tracking_sweep(30.0);
    const auto res = classify_tracking(sig, fixtures::tracking_annotation(30.0));
    CHECK(res.category == TrackingCategory::pass);
    CHECK(res.reached_far_side);
    CHECK(res.pauses.empty());
    REQUIRE(res.arrival_lag_s.has_value());
    CHECK(*res.arrival_lag_s == doctest::Approx(0.0));
}

TEST_CASE("tracking: a 14-frame pause is an interruption of 0.467 s") {
    const auto sig = fixtures::tracking_sweep(30.0, 50, 14);
    const auto res = classify_tracking(sig, fixtures::tracking_annotation(30.0));
    CHECK(res.category == TrackingCategory::interrupted);
    CHECK(res.reached_far_side);
    REQUIRE(res.pauses.size() == 1);
    CHECK(res.pauses[0].frames == 14);
    CHECK(res.pauses[0].seconds == doctest::Approx(14.0 / 30.0).epsilon(1e-9));
}

TEST_CASE("tracking: stopping at the midline is partial") {
    const auto sig = fixtures::tracking_sweep(30.0, -1, 0, /*stop_at_midline=*/true);
    const auto res = classify_tracking(sig, fixtures::tracking_annotation(30.0));
    CHECK(res.category == TrackingCategory::partial);
    CHECK_FALSE(res.reached_far_side);
}

TEST_CASE("tracking: never departing the baseline is no tracking") {
    const auto sig = fixtures::make_signal(30.0, std::vector<double>(120, 0.6));
    const auto res = classify_tracking(sig, fixtures::tracking_annotation(30.0));
    CHECK(res.category == TrackingCategory::no_tracking);
}

TEST_CASE("tracking: annotation validation") {
    const auto sig = fixtures::tracking_sweep(30.0);
    auto ann = fixtures::tracking_annotation(30.0);
    ann.object_intervals.clear();
    CHECK_THROWS_AS(classify_tracking(sig, ann), MissingField);

    ann = fixtures::tracking_annotation(30.0);
    ann.object_intervals[3].end = 500;  // outside the signal
    CHECK_THROWS_AS(classify_tracking(sig, ann), AnnotationOutOfRange);

    ann = fixtures::tracking_annotation(30.0);
    ann.object_intervals.erase(ann.object_intervals.begin() + 3);  // one stationary only
    CHECK_THROWS_AS(classify_tracking(sig, ann), AnnotationOutOfRange);
}

TEST_CASE("ball activity: 22-frame recovery gives 0.733 s look-up latency") {
    const auto sig = fixtures::ball_dip(30.0, 90, 22);
    const auto res = shared_interest_latency(sig, fixtures::ball_annotation(30.0, 90));
    REQUIRE(res.look_up_latency_s.has_value());
    CHECK(*res.look_up_latency_s == doctest::Approx(22.0 / 30.0).epsilon(1e-9));
    REQUIRE(res.look_down_duration_s.has_value());
    CHECK(*res.look_down_duration_s == doctest::Approx(19.0 / 30.0).epsilon(1e-9));
    CHECK(*res.onset_frame == 93);
    CHECK(*res.look_up_frame == 112);
}

TEST_CASE("ball activity: 251-frame recovery at 35 fps gives about 7.17 s") {
    const auto sig = fixtures::ball_dip(35.0, 40, 251);
    const auto res = shared_interest_latency(sig, fixtures::ball_annotation(35.0, 40));
    REQUIRE(res.look_up_latency_s.has_value());
    CHECK(*res.look_up_latency_s == doctest::Approx(251.0 / 35.0).epsilon(1e-9));
    CHECK(*res.look_up_latency_s == doctest::Approx(7.17).epsilon(2e-3));
}

TEST_CASE("ball activity: constant pitch yields no events") {
    const auto sig = fixtures::make_signal(30.0, {}, std::vector<double>(200, 5.0));
    const auto res = shared_interest_latency(sig, fixtures::ball_annotation(30.0, 90));
    CHECK_FALSE(res.look_up_latency_s.has_value());
    CHECK_FALSE(res.look_down_duration_s.has_value());
}

TEST_CASE("ball activity: annotation validation") {
    const auto sig = fixtures::ball_dip(30.0, 90, 22);
    CHECK_THROWS_AS(shared_interest_latency(sig, fixtures::ball_annotation(30.0, 5000)),
                    AnnotationOutOfRange);
    auto ann = fixtures::ball_annotation(30.0, 90);
    ann.contact_frame.reset();
    CHECK_THROWS_AS(shared_interest_latency(sig, ann), MissingField);
}

TEST_CASE("latencies are non-negative and within the trial") {
    const auto sig = fixtures::ball_dip(30.0, 90, 22);
    const auto res = shared_interest_latency(sig, fixtures::ball_annotation(30.0, 90));
    CHECK(*res.look_up_latency_s >= 0.0);
    CHECK(*res.look_up_latency_s <= sig.size() / sig.fps);

    const auto dsig = fixtures::disengagement_step(30.0, 60, 21);
    const auto dres =
        detect_disengagement(dsig, fixtures::disengagement_annotation(30.0, 60));
    CHECK(*dres.delay_s >= 0.0);
    CHECK(*dres.delay_s <= dsig.size() / dsig.fps);
}
