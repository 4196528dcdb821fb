#include "aosikit/formats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace aosikit::io {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        const auto pos = s.find(sep, begin);
        if (pos == std::string::npos) {
            out.push_back(s.substr(begin));
            return out;
        }
        out.push_back(s.substr(begin, pos - begin));
        begin = pos + 1;
    }
}

[[noreturn]] void fail(const std::filesystem::path& path, int line,
                       const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& tok, const std::filesystem::path& path, int line) {
    const std::string t = trim(tok);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        fail(path, line, "bad number '" + tok + "'");
    return v;
}

int parse_int(const std::string& tok, const std::filesystem::path& path, int line) {
    const std::string t = trim(tok);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        fail(path, line, "bad integer '" + tok + "'");
    return v;
}

std::ifstream open_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string() + ": cannot open");
    return in;
}

std::ofstream create_text(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(path.string() + ": cannot open for writing");
    return out;
}

constexpr const char* kLandmarkHeader = "frame,feature,src,x,y,w,h,score";

std::string skeleton_header() {
    std::string h = "frame";
    for (int j = 0; j < gait::kJointCount; ++j) {
        const char* name = gait::joint_name(static_cast<gait::Joint>(j));
        h += std::string(",") + name + "_x," + name + "_y";
    }
    return h;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, ptr};
}

std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path) {
    auto in = open_text(path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            fail(path, lineno, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            fail(path, lineno, "empty key");
        out.emplace_back(key, value);
    }
    return out;
}

std::vector<fusion::FrameObservations> parse_landmarks(const std::filesystem::path& path) {
    auto in = open_text(path);
    std::string line;
    int lineno = 0;

    if (!std::getline(in, line) || trim(line) != kLandmarkHeader)
        throw ParseError(path.string() + ":1: expected header '" +
                         std::string(kLandmarkHeader) + "'");
    lineno = 1;

    std::vector<fusion::FrameObservations> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto cols = split(trim(line), ',');
        if (cols.size() != 8)
            fail(path, lineno, "expected 8 columns, got " + std::to_string(cols.size()));

        const int frame = parse_int(cols[0], path, lineno);
        if (frame < 0)
            fail(path, lineno, "negative frame index");
        const auto feature = fusion::feature_from_name(trim(cols[1]));
        if (!feature)
            fail(path, lineno, "unknown feature '" + cols[1] + "'");
        const std::string src = trim(cols[2]);
        if (src != "trk" && src != "det")
            fail(path, lineno, "src must be 'trk' or 'det'");

        Box2D box{parse_double(cols[3], path, lineno), parse_double(cols[4], path, lineno),
                  parse_double(cols[5], path, lineno), parse_double(cols[6], path, lineno)};
        if (!box.well_formed())
            fail(path, lineno, "box width/height must be positive");
        const double score = parse_double(cols[7], path, lineno);

        if (out.empty() || out.back().frame_index != frame) {
            if (!out.empty() && frame <= out.back().frame_index)
                throw NonMonotonicFrames(path.string() + ":" + std::to_string(lineno) +
                                         ": frame " + std::to_string(frame) +
                                         " after frame " +
                                         std::to_string(out.back().frame_index));
            out.emplace_back();
            out.back().frame_index = frame;
        }

        auto& obs = out.back()[*feature];
        if (!obs)
            obs.emplace();
        if (src == "trk") {
            if (obs->tracker_box)
                fail(path, lineno, "duplicate trk row for feature");
            obs->tracker_box = box;
        } else {
            if (obs->detector_box)
                fail(path, lineno, "duplicate det row for feature");
            obs->detector_box = box;
            obs->detector_score = score;
        }
    }
    return out;
}

void write_landmarks(const std::filesystem::path& path,
                     std::span<const fusion::FrameObservations> frames) {
    auto out = create_text(path);
    out << kLandmarkHeader << "\n";
    for (const auto& frame : frames) {
        for (int f = 0; f < 4; ++f) {
            const auto& obs = frame.features[f];
            if (!obs)
                continue;
            const char* name = fusion::feature_name(static_cast<fusion::Feature>(f));
            if (obs->tracker_box) {
                const Box2D& b = *obs->tracker_box;
                out << frame.frame_index << "," << name << ",trk,"
                    << format_double(b.cx) << "," << format_double(b.cy) << ","
                    << format_double(b.w) << "," << format_double(b.h) << ",0\n";
            }
            if (obs->detector_box) {
                const Box2D& b = *obs->detector_box;
                out << frame.frame_index << "," << name << ",det,"
                    << format_double(b.cx) << "," << format_double(b.cy) << ","
                    << format_double(b.w) << "," << format_double(b.h) << ","
                    << format_double(obs->detector_score) << "\n";
            }
        }
    }
}

attention::TrialAnnotation parse_annotation(const std::filesystem::path& path) {
    attention::TrialAnnotation ann;
    bool have_task = false, have_fps = false;

    for (const auto& [key, value] : read_key_values(path)) {
        if (key == "task") {
            const auto task = attention::task_from_name(value);
            if (!task)
                throw UnknownTask("unknown task '" + value + "' in " + path.string());
            ann.task = *task;
            have_task = true;
        } else if (key == "fps") {
            ann.fps = parse_double(value, path, 0);
            have_fps = true;
        } else if (key == "presentation_frame") {
            ann.presentation_frame = parse_int(value, path, 0);
        } else if (key == "target_side") {
            if (value == "left")
                ann.target_side = attention::Side::left;
            else if (value == "right")
                ann.target_side = attention::Side::right;
            else
                throw ParseError(path.string() + ": target_side must be left or right");
        } else if (key == "contact_frame") {
            ann.contact_frame = parse_int(value, path, 0);
        } else if (key == "interval") {
            std::istringstream iss(value);
            std::string label;
            int begin = 0, end = 0;
            if (!(iss >> label >> begin >> end))
                throw ParseError(path.string() + ": interval needs '<label> <begin> <end>'");
            const auto l = attention::interval_label_from_name(label);
            if (!l)
                throw ParseError(path.string() + ": interval label must be R, L or stationary");
            ann.object_intervals.push_back({*l, begin, end});
        } else {
            throw ParseError(path.string() + ": unknown annotation key '" + key + "'");
        }
    }

    if (!have_task)
        throw MissingField("task (" + path.string() + ")");
    if (!have_fps)
        throw MissingField("fps (" + path.string() + ")");
    switch (ann.task) {
        case attention::Task::disengagement:
            if (!ann.presentation_frame)
                throw MissingField("presentation_frame (" + path.string() + ")");
            if (!ann.target_side)
                throw MissingField("target_side (" + path.string() + ")");
            break;
        case attention::Task::tracking:
            if (ann.object_intervals.empty())
                throw MissingField("object_intervals (" + path.string() + ")");
            break;
        case attention::Task::shared_interest:
            if (!ann.contact_frame)
                throw MissingField("contact_frame (" + path.string() + ")");
            break;
    }
    return ann;
}

void write_annotation(const std::filesystem::path& path,
                      const attention::TrialAnnotation& ann) {
    auto out = create_text(path);
    out << "task = " << attention::task_name(ann.task) << "\n";
    out << "fps = " << format_double(ann.fps) << "\n";
    if (ann.presentation_frame)
        out << "presentation_frame = " << *ann.presentation_frame << "\n";
    if (ann.target_side)
        out << "target_side = "
            << (*ann.target_side == attention::Side::left ? "left" : "right") << "\n";
    if (ann.contact_frame)
        out << "contact_frame = " << *ann.contact_frame << "\n";
    for (const auto& iv : ann.object_intervals)
        out << "interval = " << attention::interval_label_name(iv.label) << " "
            << iv.begin << " " << iv.end << "\n";
}

SkeletonSequence read_skeletons(const std::filesystem::path& path) {
    auto in = open_text(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != skeleton_header())
        throw ParseError(path.string() + ":1: expected header '" + skeleton_header() + "'");

    SkeletonSequence seq;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto cols = split(trim(line), ',');
        if (cols.size() != 1 + 2 * gait::kJointCount)
            fail(path, lineno, "expected " + std::to_string(1 + 2 * gait::kJointCount) +
                                   " columns, got " + std::to_string(cols.size()));
        const int frame = parse_int(cols[0], path, lineno);
        if (!seq.frames.empty() && frame <= seq.frames.back())
            throw NonMonotonicFrames(path.string() + ":" + std::to_string(lineno) +
                                     ": frame " + std::to_string(frame));
        gait::Skeleton2D sk;
        for (int j = 0; j < gait::kJointCount; ++j) {
            sk.joints[j].x = parse_double(cols[1 + 2 * j], path, lineno);
            sk.joints[j].y = parse_double(cols[2 + 2 * j], path, lineno);
        }
        seq.frames.push_back(frame);
        seq.skeletons.push_back(sk);
    }
    return seq;
}

void write_skeletons(const std::filesystem::path& path, const SkeletonSequence& seq) {
    auto out = create_text(path);
    out << skeleton_header() << "\n";
    for (std::size_t i = 0; i < seq.skeletons.size(); ++i) {
        out << seq.frames[i];
        for (int j = 0; j < gait::kJointCount; ++j)
            out << "," << format_double(seq.skeletons[i].joints[j].x) << ","
                << format_double(seq.skeletons[i].joints[j].y);
        out << "\n";
    }
}

gait::Skeleton2D read_stickman(const std::filesystem::path& path) {
    gait::Skeleton2D sk;
    std::array<bool, gait::kJointCount> seen{};
    for (const auto& [key, value] : read_key_values(path)) {
        const auto joint = gait::joint_from_name(key);
        if (!joint)
            throw ParseError(path.string() + ": unknown joint '" + key + "'");
        std::istringstream iss(value);
        double x = 0, y = 0;
        if (!(iss >> x >> y))
            throw ParseError(path.string() + ": joint '" + key + "' needs '<x> <y>'");
        sk[*joint] = {x, y};
        seen[static_cast<int>(*joint)] = true;
    }
    for (int j = 0; j < gait::kJointCount; ++j)
        if (!seen[j])
            throw MissingField(std::string(gait::joint_name(static_cast<gait::Joint>(j))) +
                               " (" + path.string() + ")");
    return sk;
}

void write_stickman(const std::filesystem::path& path, const gait::Skeleton2D& sk) {
    auto out = create_text(path);
    for (int j = 0; j < gait::kJointCount; ++j)
        out << gait::joint_name(static_cast<gait::Joint>(j)) << " = "
            << format_double(sk.joints[j].x) << " " << format_double(sk.joints[j].y)
            << "\n";
}

void apply_config_entry(SessionConfig& cfg, const std::string& key,
                        const std::string& value) {
    const std::filesystem::path ctx = "<config>";
    auto num = [&] { return parse_double(value, ctx, 0); };
    auto integer = [&] { return parse_int(value, ctx, 0); };

    if (key == "fps") cfg.fps = num();
    else if (key == "baseline_window_s") cfg.detection.baseline_window_s = num();
    else if (key == "delta") cfg.detection.delta_abs = num();
    else if (key == "delta_frac") cfg.detection.delta_frac = num();
    else if (key == "sustain_frames") cfg.detection.sustain_frames = integer();
    else if (key == "plateau_eps") cfg.detection.plateau_eps = num();
    else if (key == "pause_min_s") cfg.detection.pause_min_s = num();
    else if (key == "far_side_frac") cfg.detection.far_side_frac = num();
    else if (key == "pitch_drop") cfg.detection.pitch_drop_abs = num();
    else if (key == "pitch_drop_frac") cfg.detection.pitch_drop_frac = num();
    else if (key == "tau") cfg.asymmetry.tau_deg = num();
    else if (key == "sigma") cfg.asymmetry.sigma_deg = num();
    else if (key == "as_star_min") cfg.asymmetry.as_star_min = num();
    else if (key == "ad_f_min") cfg.asymmetry.ad_f_min_deg = num();
    else if (key == "t_max") cfg.csm.grids.t_max = num();
    else if (key == "t_step") cfg.csm.grids.t_step = num();
    else if (key == "r_max") cfg.csm.grids.r_max = num();
    else if (key == "r_step") cfg.csm.grids.r_step = num();
    else if (key == "rho") cfg.csm.rho = integer();
    else if (key == "scales") {
        std::vector<double> scales;
        for (const auto& tok : split(value, ','))
            scales.push_back(parse_double(tok, ctx, 0));
        if (scales.empty())
            throw ParseError("config: scales must not be empty");
        cfg.csm.grids.scales = scales;
    } else if (key == "detector_score_min") {
        cfg.fusion.detector_score_min = num();
    } else if (key == "right_eye_search_scale") {
        cfg.fusion.right_eye_search_scale = num();
    } else {
        throw ParseError("config: unknown key '" + key + "'");
    }
}

SessionConfig parse_config(const std::filesystem::path& path) {
    SessionConfig cfg;
    for (const auto& [key, value] : read_key_values(path))
        apply_config_entry(cfg, key, value);
    return cfg;
}

}  // namespace aosikit::io
