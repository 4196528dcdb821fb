#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "aosikit/formats.hpp"
#include "aosikit/pgm.hpp"

using namespace aosikit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("aosikit_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

}  // namespace

TEST_CASE("landmarks: minimal single-frame file") {
    TempDir dir;
    write_text(dir.file("lm.csv"),
               "frame,feature,src,x,y,w,h,score\n"
               "0,left_ear,trk,50,50,10,10,0\n"
               "0,left_eye,trk,80,40,8,8,0\n"
               "0,nose,trk,95,55,8,8,0\n");
    const auto frames = io::parse_landmarks(dir.file("lm.csv"));
    REQUIRE(frames.size() == 1);
    CHECK(frames[0].frame_index == 0);
    CHECK(frames[0][fusion::Feature::left_ear]->tracker_box->cx == 50);
    CHECK_FALSE(frames[0][fusion::Feature::right_eye].has_value());
}

TEST_CASE("landmarks: parse errors carry the line number") {
    TempDir dir;
    write_text(dir.file("bad.csv"),
               "frame,feature,src,x,y,w,h,score\n"
               "0,left_ear,trk,50,50,-10,10,0\n");
    try {
        io::parse_landmarks(dir.file("bad.csv"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    write_text(dir.file("order.csv"),
               "frame,feature,src,x,y,w,h,score\n"
               "0,left_ear,trk,50,50,10,10,0\n"
               "2,left_ear,trk,50,50,10,10,0\n"
               "1,left_ear,trk,50,50,10,10,0\n");
    CHECK_THROWS_AS(io::parse_landmarks(dir.file("order.csv")), NonMonotonicFrames);

    write_text(dir.file("src.csv"),
               "frame,feature,src,x,y,w,h,score\n"
               "0,left_ear,xxx,50,50,10,10,0\n");
    CHECK_THROWS_AS(io::parse_landmarks(dir.file("src.csv")), ParseError);

    write_text(dir.file("hdr.csv"), "frame,feature\n");
    CHECK_THROWS_AS(io::parse_landmarks(dir.file("hdr.csv")), ParseError);
}

TEST_CASE("landmarks: emit then parse is lossless") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> coord(5.0, 500.0);
    std::uniform_real_distribution<double> score(-2.0, 2.0);
    std::bernoulli_distribution has_det(0.7), has_right(0.4);

    std::vector<fusion::FrameObservations> frames;
    for (int t = 0; t < 20; ++t) {
        fusion::FrameObservations f;
        f.frame_index = t * 2;  // gaps are allowed
        for (int k = 0; k < 3; ++k) {
            fusion::FeatureObservation o;
            o.tracker_box = Box2D{coord(rng), coord(rng), coord(rng), coord(rng)};
            if (has_det(rng)) {
                o.detector_box = Box2D{coord(rng), coord(rng), coord(rng), coord(rng)};
                o.detector_score = score(rng);
            }
            f.features[k] = o;
        }
        if (has_right(rng)) {
            fusion::FeatureObservation o;
            o.detector_box = Box2D{coord(rng), coord(rng), coord(rng), coord(rng)};
            o.detector_score = score(rng);
            f.features[3] = o;
        }
        frames.push_back(f);
    }

    TempDir dir;
    io::write_landmarks(dir.file("rt.csv"), frames);
    const auto parsed = io::parse_landmarks(dir.file("rt.csv"));
    REQUIRE(parsed.size() == frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        CHECK(parsed[i].frame_index == frames[i].frame_index);
        for (int k = 0; k < 4; ++k) {
            const auto& a = frames[i].features[k];
            const auto& b = parsed[i].features[k];
            REQUIRE(a.has_value() == b.has_value());
            if (!a)
                continue;
            CHECK(a->tracker_box.has_value() == b->tracker_box.has_value());
            if (a->tracker_box)
                CHECK(*a->tracker_box == *b->tracker_box);
            CHECK(a->detector_box.has_value() == b->detector_box.has_value());
            if (a->detector_box) {
                CHECK(*a->detector_box == *b->detector_box);
                CHECK(a->detector_score == b->detector_score);
            }
        }
    }
}

TEST_CASE("annotation: task validation") {
    TempDir dir;
    write_text(dir.file("dis.txt"),
               "task = disengagement\nfps = 30\npresentation_frame = 120\n"
               "target_side = left\n");
    const auto ann = io::parse_annotation(dir.file("dis.txt"));
    CHECK(ann.task == attention::Task::disengagement);
    CHECK(*ann.presentation_frame == 120);
    CHECK(*ann.target_side == attention::Side::left);

    write_text(dir.file("trk.txt"), "task = tracking\nfps = 30\n");
    CHECK_THROWS_AS(io::parse_annotation(dir.file("trk.txt")), MissingField);

    write_text(dir.file("foo.txt"), "task = foo\nfps = 30\n");
    CHECK_THROWS_AS(io::parse_annotation(dir.file("foo.txt")), UnknownTask);

    write_text(dir.file("side.txt"),
               "task = disengagement\nfps = 30\npresentation_frame = 1\n"
               "target_side = up\n");
    CHECK_THROWS_AS(io::parse_annotation(dir.file("side.txt")), ParseError);
}

TEST_CASE("annotation: emit then parse is lossless for all tasks") {
    TempDir dir;

    attention::TrialAnnotation dis;
    dis.task = attention::Task::disengagement;
    dis.fps = 29.97;
    dis.presentation_frame = 120;
    dis.target_side = attention::Side::right;

    attention::TrialAnnotation trk;
    trk.task = attention::Task::tracking;
    trk.fps = 30;
    trk.object_intervals = {{attention::IntervalLabel::right, 0, 60},
                            {attention::IntervalLabel::stationary, 0, 30},
                            {attention::IntervalLabel::left, 60, 120},
                            {attention::IntervalLabel::stationary, 90, 120}};

    attention::TrialAnnotation ball;
    ball.task = attention::Task::shared_interest;
    ball.fps = 35;
    ball.contact_frame = 40;

    for (const auto& ann : {dis, trk, ball}) {
        io::write_annotation(dir.file("rt.txt"), ann);
        const auto parsed = io::parse_annotation(dir.file("rt.txt"));
        CHECK(parsed.task == ann.task);
        CHECK(parsed.fps == ann.fps);
        CHECK(parsed.presentation_frame == ann.presentation_frame);
        CHECK(parsed.target_side == ann.target_side);
        CHECK(parsed.contact_frame == ann.contact_frame);
        REQUIRE(parsed.object_intervals.size() == ann.object_intervals.size());
        for (std::size_t i = 0; i < ann.object_intervals.size(); ++i) {
            CHECK(parsed.object_intervals[i].label == ann.object_intervals[i].label);
            CHECK(parsed.object_intervals[i].begin == ann.object_intervals[i].begin);
            CHECK(parsed.object_intervals[i].end == ann.object_intervals[i].end);
        }
    }
}

TEST_CASE("skeletons: emit then parse is lossless") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> coord(0.0, 128.0);
    io::SkeletonSequence seq;
    for (int t = 0; t < 10; ++t) {
        gait::Skeleton2D sk;
        for (auto& p : sk.joints)
            p = {coord(rng), coord(rng)};
        seq.frames.push_back(t);
        seq.skeletons.push_back(sk);
    }
    TempDir dir;
    io::write_skeletons(dir.file("sk.csv"), seq);
    const auto parsed = io::read_skeletons(dir.file("sk.csv"));
    REQUIRE(parsed.frames == seq.frames);
    for (std::size_t i = 0; i < seq.skeletons.size(); ++i)
        for (int j = 0; j < gait::kJointCount; ++j) {
            CHECK(parsed.skeletons[i].joints[j].x == seq.skeletons[i].joints[j].x);
            CHECK(parsed.skeletons[i].joints[j].y == seq.skeletons[i].joints[j].y);
        }

    write_text(dir.file("bad.csv"), "frame,nope\n");
    CHECK_THROWS_AS(io::read_skeletons(dir.file("bad.csv")), ParseError);
}

TEST_CASE("stickman sidecar: round-trip and missing joints") {
    gait::Skeleton2D sk;
    for (int j = 0; j < gait::kJointCount; ++j)
        sk.joints[j] = {j * 1.5, j * 2.25};
    TempDir dir;
    io::write_stickman(dir.file("st.txt"), sk);
    const auto parsed = io::read_stickman(dir.file("st.txt"));
    for (int j = 0; j < gait::kJointCount; ++j) {
        CHECK(parsed.joints[j].x == sk.joints[j].x);
        CHECK(parsed.joints[j].y == sk.joints[j].y);
    }

    write_text(dir.file("short.txt"), "head = 1 2\nneck = 3 4\n");
    CHECK_THROWS_AS(io::read_stickman(dir.file("short.txt")), MissingField);
}

TEST_CASE("pgm: mask and label round-trips") {
    std::mt19937 rng(3);
    csm::Mask mask(37, 23, 0);
    for (auto& v : mask.data)
        v = rng() % 2;
    TempDir dir;
    io::write_mask_pgm(dir.file("m.pgm"), mask);
    const auto back = io::read_mask_pgm(dir.file("m.pgm"));
    CHECK(back.width == mask.width);
    CHECK(back.height == mask.height);
    CHECK(back.data == mask.data);

    csm::LabelGrid labels(19, 31, 0);
    for (auto& v : labels.data)
        v = rng() % (csm::kPartCount + 1);
    io::write_label_pgm(dir.file("l.pgm"), labels);
    const auto lback = io::read_label_pgm(dir.file("l.pgm"));
    CHECK(lback.data == labels.data);
}

TEST_CASE("pgm: header handling and validation") {
    TempDir dir;
    {
        std::ofstream out(dir.file("c.pgm"), std::ios::binary);
        out << "P5\n# a comment\n2 2\n255\n";
        const unsigned char px[4] = {0, 255, 255, 0};
        out.write(reinterpret_cast<const char*>(px), 4);
    }
    const auto mask = io::read_mask_pgm(dir.file("c.pgm"));
    CHECK(mask.at(0, 0) == 0);
    CHECK(mask.at(1, 0) == 1);

    write_text(dir.file("p2.pgm"), "P2\n2 2\n255\n0 0 0 0\n");
    CHECK_THROWS_AS(io::read_mask_pgm(dir.file("p2.pgm")), ParseError);

    {
        std::ofstream out(dir.file("range.pgm"), std::ios::binary);
        out << "P5\n1 1\n255\n";
        const unsigned char px = 17;  // neither 0 nor 255
        out.write(reinterpret_cast<const char*>(&px), 1);
    }
    CHECK_THROWS_AS(io::read_mask_pgm(dir.file("range.pgm")), ParseError);
    CHECK_THROWS_AS(io::read_label_pgm(dir.file("range.pgm")), ParseError);  // 17 > 10

    {
        std::ofstream out(dir.file("trunc.pgm"), std::ios::binary);
        out << "P5\n4 4\n255\nab";
    }
    CHECK_THROWS_AS(io::read_mask_pgm(dir.file("trunc.pgm")), ParseError);
}

TEST_CASE("config: file parsing and overrides") {
    TempDir dir;
    write_text(dir.file("cfg.txt"),
               "# thresholds\nfps = 25\nsustain_frames = 4\ntau = 50\n"
               "scales = 0.8,1.0,1.2\nrho = 2\n");
    const auto cfg = io::parse_config(dir.file("cfg.txt"));
    CHECK(cfg.fps == 25.0);
    CHECK(cfg.detection.sustain_frames == 4);
    CHECK(cfg.asymmetry.tau_deg == 50.0);
    CHECK(cfg.csm.grids.scales == std::vector<double>{0.8, 1.0, 1.2});
    CHECK(cfg.csm.rho == 2);
    // untouched defaults
    CHECK(cfg.detection.plateau_eps == 0.01);

    SessionConfig c2;
    CHECK_THROWS_AS(io::apply_config_entry(c2, "nonsense", "1"), ParseError);
    CHECK_THROWS_AS(io::apply_config_entry(c2, "fps", "abc"), ParseError);
    io::apply_config_entry(c2, "delta", "0.25");
    REQUIRE(c2.detection.delta_abs.has_value());
    CHECK(*c2.detection.delta_abs == 0.25);
}
