// aosikit: behavioral-marker analysis of assessment recordings.
//
//   attention disengage|track|ball   landmark CSV + annotation -> trial report
//   gait analyze                     skeleton CSV -> asymmetry series, SS/DS
//   pose track                       PGM masks -> per-frame skeletons
//   fuse                             landmark CSV -> fused landmark stream
//
// Each run writes report.json plus a per-frame plot CSV into --out-dir.
// Exit codes: 0 ok, 2 parse/config error, 3 analysis error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "aosikit/asymmetry.hpp"
#include "aosikit/attention.hpp"
#include "aosikit/config.hpp"
#include "aosikit/csm.hpp"
#include "aosikit/formats.hpp"
#include "aosikit/fusion.hpp"
#include "aosikit/head_geometry.hpp"
#include "aosikit/pgm.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace aosikit;

namespace {

constexpr std::array<std::pair<const char*, const char*>, 22> kConfigFlags = {{
    {"--fps", "fps"},
    {"--baseline-window-s", "baseline_window_s"},
    {"--delta", "delta"},
    {"--delta-frac", "delta_frac"},
    {"--sustain-frames", "sustain_frames"},
    {"--plateau-eps", "plateau_eps"},
    {"--pause-min-s", "pause_min_s"},
    {"--far-side-frac", "far_side_frac"},
    {"--pitch-drop", "pitch_drop"},
    {"--pitch-drop-frac", "pitch_drop_frac"},
    {"--tau", "tau"},
    {"--sigma", "sigma"},
    {"--as-star-min", "as_star_min"},
    {"--ad-f-min", "ad_f_min"},
    {"--t-max", "t_max"},
    {"--t-step", "t_step"},
    {"--r-max", "r_max"},
    {"--r-step", "r_step"},
    {"--scales", "scales"},
    {"--rho", "rho"},
    {"--detector-score-min", "detector_score_min"},
    {"--right-eye-search-scale", "right_eye_search_scale"},
}};

json config_echo(const SessionConfig& cfg) {
    json scales = json::array();
    for (double s : cfg.csm.grids.scales)
        scales.push_back(s);
    json j = {
        {"fps", cfg.fps},
        {"baseline_window_s", cfg.detection.baseline_window_s},
        {"delta_frac", cfg.detection.delta_frac},
        {"sustain_frames", cfg.detection.sustain_frames},
        {"plateau_eps", cfg.detection.plateau_eps},
        {"pause_min_s", cfg.detection.pause_min_s},
        {"far_side_frac", cfg.detection.far_side_frac},
        {"pitch_drop_frac", cfg.detection.pitch_drop_frac},
        {"tau", cfg.asymmetry.tau_deg},
        {"sigma", cfg.asymmetry.sigma_deg},
        {"as_star_min", cfg.asymmetry.as_star_min},
        {"ad_f_min", cfg.asymmetry.ad_f_min_deg},
        {"t_max", cfg.csm.grids.t_max},
        {"t_step", cfg.csm.grids.t_step},
        {"r_max", cfg.csm.grids.r_max},
        {"r_step", cfg.csm.grids.r_step},
        {"scales", scales},
        {"rho", cfg.csm.rho},
        {"detector_score_min", cfg.fusion.detector_score_min},
        {"right_eye_search_scale", cfg.fusion.right_eye_search_scale},
    };
    if (cfg.detection.delta_abs)
        j["delta"] = *cfg.detection.delta_abs;
    if (cfg.detection.pitch_drop_abs)
        j["pitch_drop"] = *cfg.detection.pitch_drop_abs;
    return j;
}

// Files created by this run; removed again if it fails midway.
struct RunOutputs {
    fs::path dir;
    std::vector<fs::path> written;
    bool committed = false;

    explicit RunOutputs(fs::path d) : dir(std::move(d)) { fs::create_directories(dir); }
    ~RunOutputs() {
        if (committed)
            return;
        std::error_code ec;
        for (const auto& p : written)
            fs::remove(p, ec);
    }
    fs::path file(const std::string& name) {
        written.push_back(dir / name);
        return written.back();
    }
};

void write_report(RunOutputs& out, const json& report) {
    std::ofstream f(out.file("report.json"));
    f << report.dump(2) << "\n";
    if (!f)
        throw Error("cannot write report.json");
}

json fusion_events(const fusion::FusionRun& run) {
    json resets = json::array();
    for (const auto& r : run.resets)
        resets.push_back({{"frame", r.frame}, {"feature", fusion::feature_name(r.feature)}});
    json violations = json::array();
    for (const auto& f : run.frames)
        if (!f.constraints_ok)
            violations.push_back(f.frame.frame_index);
    return {{"resets", resets}, {"constraint_violations", violations}};
}

struct SignalBundle {
    fusion::FusionRun run;
    head::HeadSignal signal;
};

SignalBundle signal_from_landmarks(const fs::path& landmarks, double fps,
                                   const SessionConfig& cfg) {
    const auto observations = io::parse_landmarks(landmarks);
    SignalBundle out;
    out.run = fusion::run(observations, cfg.fusion);

    std::vector<head::LandmarkFrame> frames;
    std::vector<bool> invalid;
    frames.reserve(out.run.frames.size());
    for (const auto& f : out.run.frames) {
        frames.push_back(f.frame);
        invalid.push_back(!f.constraints_ok);
    }
    out.signal = head::head_signal(frames, fps, invalid);
    return out;
}

void write_signal_csv(const fs::path& path, const head::HeadSignal& sig,
                      int first_frame) {
    std::ofstream out(path);
    out << "frame,yaw_hat,pitch_cum,right_eye,held\n";
    for (std::size_t t = 0; t < sig.size(); ++t)
        out << first_frame + static_cast<int>(t) << "," << io::format_double(sig.yaw[t])
            << "," << io::format_double(sig.pitch_cum[t]) << ","
            << (sig.right_eye_present[t] ? 1 : 0) << "," << (sig.held[t] ? 1 : 0)
            << "\n";
    if (!out)
        throw Error("cannot write " + path.string());
}

json base_report(const std::string& command, const SessionConfig& cfg) {
    return {
        {"tool", {{"name", "aosikit"}, {"version", kVersion}}},
        {"command", command},
        {"config", config_echo(cfg)},
    };
}

int run_attention(const std::string& mode, const fs::path& landmarks,
                  const fs::path& annotation, const SessionConfig& cfg,
                  const fs::path& out_dir) {
    const auto ann = io::parse_annotation(annotation);
    RunOutputs out(out_dir);

    const auto bundle = signal_from_landmarks(landmarks, ann.fps, cfg);
    write_signal_csv(out.file("signal.csv"), bundle.signal,
                     bundle.run.frames.empty() ? 0 : bundle.run.frames[0].frame.frame_index);

    json report = base_report("attention " + mode, cfg);
    report["inputs"] = {{"landmarks", landmarks.string()},
                        {"annotation", annotation.string()}};
    report["fusion"] = fusion_events(bundle.run);

    json result;
    if (mode == "disengage") {
        const auto r = attention::detect_disengagement(bundle.signal, ann, cfg.detection);
        result["category"] = attention::delay_category_name(r.category);
        if (r.delay_s)
            result["delay_s"] = *r.delay_s;
        if (r.arrival_frame)
            result["arrival_frame"] = *r.arrival_frame;
        result["baseline"] = r.baseline;
        result["threshold"] = r.threshold;
    } else if (mode == "track") {
        const auto r = attention::classify_tracking(bundle.signal, ann, cfg.detection);
        result["category"] = attention::tracking_category_name(r.category);
        result["reached_far_side"] = r.reached_far_side;
        if (r.arrival_lag_s)
            result["arrival_lag_s"] = *r.arrival_lag_s;
        json pauses = json::array();
        for (const auto& p : r.pauses)
            pauses.push_back(
                {{"begin", p.begin}, {"frames", p.frames}, {"seconds", p.seconds}});
        result["pauses"] = pauses;
    } else {
        const auto r = attention::shared_interest_latency(bundle.signal, ann, cfg.detection);
        if (r.look_up_latency_s)
            result["look_up_latency_s"] = *r.look_up_latency_s;
        if (r.look_down_duration_s)
            result["look_down_duration_s"] = *r.look_down_duration_s;
        if (r.onset_frame)
            result["onset_frame"] = *r.onset_frame;
        if (r.look_up_frame)
            result["look_up_frame"] = *r.look_up_frame;
        result["baseline"] = r.baseline;
    }
    report["result"] = result;
    write_report(out, report);
    out.committed = true;
    return 0;
}

int run_gait(const fs::path& skeletons, const SessionConfig& cfg, const fs::path& out_dir) {
    const auto seq = io::read_skeletons(skeletons);
    if (seq.skeletons.empty())
        throw EmptySequence("no skeleton records in " + skeletons.string());
    RunOutputs out(out_dir);

    std::vector<gait::AsymmetryFrame> rows;
    std::vector<bool> flags;
    std::vector<gait::ArmAngles> angles;
    rows.reserve(seq.skeletons.size());
    for (const auto& sk : seq.skeletons) {
        angles.push_back(gait::arm_angles(sk));
        rows.push_back(gait::analyze_frame(sk, cfg.asymmetry));
        flags.push_back(rows.back().asymmetric);
    }

    {
        std::ofstream csv(out.file("asymmetry.csv"));
        csv << "frame,as_star,ad_f,f_l,f_r,asymmetric\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            csv << seq.frames[i] << "," << io::format_double(rows[i].as_star) << ","
                << io::format_double(rows[i].ad_f) << ","
                << io::format_double(angles[i].f_l) << ","
                << io::format_double(angles[i].f_r) << ","
                << (rows[i].asymmetric ? 1 : 0) << "\n";
        if (!csv)
            throw Error("cannot write asymmetry.csv");
    }

    json report = base_report("gait analyze", cfg);
    report["inputs"] = {{"skeletons", skeletons.string()}};
    report["result"] = {
        {"frames", rows.size()},
        {"asymmetric_frames",
         static_cast<int>(std::count(flags.begin(), flags.end(), true))},
        {"static_symmetry", gait::static_symmetry(flags)},
        {"dynamic_symmetry", gait::dynamic_symmetry(flags, cfg.fps)},
    };
    write_report(out, report);
    out.committed = true;
    return 0;
}

std::vector<fs::path> collect_masks(const std::vector<std::string>& mask_args) {
    std::vector<fs::path> paths;
    for (const auto& arg : mask_args) {
        const fs::path p(arg);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.path().extension() == ".pgm")
                    paths.push_back(entry.path());
        } else {
            paths.push_back(p);
        }
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

int run_pose(const std::vector<std::string>& mask_args, const fs::path& labeled_mask,
             const fs::path& stickman_path, const std::vector<std::string>& corrections,
             const SessionConfig& cfg, const fs::path& out_dir) {
    const auto mask_paths = collect_masks(mask_args);
    if (mask_paths.empty())
        throw EmptyMask("no mask files given");

    const auto labels = io::read_label_pgm(labeled_mask);
    const auto stickman = io::read_stickman(stickman_path);
    const auto model = csm::build_csm(labels, stickman, cfg.csm.rho);

    std::vector<csm::Mask> masks;
    masks.reserve(mask_paths.size());
    for (const auto& p : mask_paths)
        masks.push_back(io::read_mask_pgm(p));

    // frame:labels.pgm:stickman.txt
    std::map<int, csm::Correction> correction_map;
    for (const auto& c : corrections) {
        const auto first = c.find(':');
        const auto second = c.find(':', first + 1);
        if (first == std::string::npos || second == std::string::npos)
            throw ParseError("--correct expects frame:labels.pgm:stickman.txt");
        const int frame = std::stoi(c.substr(0, first));
        correction_map[frame] = {
            io::read_label_pgm(c.substr(first + 1, second - first - 1)),
            io::read_stickman(c.substr(second + 1))};
    }

    const auto results = csm::track_sequence(model, masks, cfg.csm, correction_map);

    RunOutputs out(out_dir);
    io::SkeletonSequence seq;
    for (std::size_t t = 0; t < results.size(); ++t) {
        seq.frames.push_back(static_cast<int>(t));
        seq.skeletons.push_back(results[t].skeleton);
    }
    io::write_skeletons(out.file("skeletons.csv"), seq);

    json frames = json::array();
    double mean_score = 0.0;
    for (std::size_t t = 0; t < results.size(); ++t) {
        json f = {{"frame", t}, {"score", results[t].score}, {"held", results[t].held}};
        json root = {{"tx", results[t].transforms[0].translation.x},
                     {"ty", results[t].transforms[0].translation.y},
                     {"rotation_deg", results[t].transforms[0].rotation_deg},
                     {"scale", results[t].transforms[0].scale}};
        f["root"] = root;
        frames.push_back(f);
        mean_score += results[t].score;
    }

    json report = base_report("pose track", cfg);
    report["inputs"] = {{"labeled_mask", labeled_mask.string()},
                        {"stickman", stickman_path.string()},
                        {"masks", static_cast<int>(mask_paths.size())}};
    report["result"] = {{"frames", results.size()},
                        {"mean_score", mean_score / results.size()},
                        {"per_frame", frames}};
    write_report(out, report);
    out.committed = true;
    return 0;
}

int run_fuse(const fs::path& landmarks, const SessionConfig& cfg, const fs::path& out_dir) {
    const auto observations = io::parse_landmarks(landmarks);
    const auto run = fusion::run(observations, cfg.fusion);
    RunOutputs out(out_dir);

    // fused stream, re-emitted in the landmark format (tracker rows)
    std::vector<fusion::FrameObservations> fused;
    for (const auto& f : run.frames) {
        fusion::FrameObservations obs;
        obs.frame_index = f.frame.frame_index;
        obs[fusion::Feature::left_ear] =
            fusion::FeatureObservation{f.frame.left_ear, std::nullopt, 0.0};
        obs[fusion::Feature::left_eye] =
            fusion::FeatureObservation{f.frame.left_eye, std::nullopt, 0.0};
        obs[fusion::Feature::nose] =
            fusion::FeatureObservation{f.frame.nose, std::nullopt, 0.0};
        if (f.frame.right_eye)
            obs[fusion::Feature::right_eye] =
                fusion::FeatureObservation{*f.frame.right_eye, std::nullopt, 0.0};
        fused.push_back(obs);
    }
    io::write_landmarks(out.file("fused_landmarks.csv"), fused);

    json report = base_report("fuse", cfg);
    report["inputs"] = {{"landmarks", landmarks.string()}};
    report["fusion"] = fusion_events(run);
    report["result"] = {{"frames", run.frames.size()},
                        {"resets", run.resets.size()}};
    write_report(out, report);
    out.committed = true;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavioral-marker analysis of assessment recordings"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::pair<std::string, std::string>> overrides;

    app.add_option("--config", config_path, "config file (key = value)")
        ->envname("AOSIKIT_CONFIG");
    app.add_option("--out-dir", out_dir, "output directory for this run");
    for (const auto& [flag, key] : kConfigFlags) {
        const std::string k = key;
        app.add_option_function<std::string>(
               flag, [k, &overrides](const std::string& v) { overrides.emplace_back(k, v); },
               "override config key " + k)
            ->expected(1);
    }

    std::string landmarks, annotation, skeletons, labeled_mask, stickman;
    std::vector<std::string> masks, corrections;

    auto* attention_cmd = app.add_subcommand("attention", "AOSI visual-attention trials");
    attention_cmd->require_subcommand(1);
    attention_cmd->fallthrough();
    std::array<CLI::App*, 3> attention_modes{};
    const char* mode_names[3] = {"disengage", "track", "ball"};
    const char* mode_help[3] = {"disengagement of attention",
                                "visual tracking smoothness",
                                "ball-activity shared interest"};
    for (int i = 0; i < 3; ++i) {
        auto* sub = attention_cmd->add_subcommand(mode_names[i], mode_help[i]);
        sub->fallthrough();
        sub->add_option("--landmarks", landmarks, "landmark CSV")->required();
        sub->add_option("--annotation", annotation, "trial annotation")->required();
        attention_modes[i] = sub;
    }

    auto* gait_cmd = app.add_subcommand("gait", "arm-asymmetry analysis");
    gait_cmd->fallthrough();
    auto* gait_analyze = gait_cmd->add_subcommand("analyze", "skeleton file to SS/DS");
    gait_analyze->fallthrough();
    gait_analyze->add_option("--skeletons", skeletons, "skeleton CSV")->required();
    gait_cmd->require_subcommand(1);

    auto* pose_cmd = app.add_subcommand("pose", "body-pose estimation");
    pose_cmd->fallthrough();
    auto* pose_track = pose_cmd->add_subcommand("track", "masks to skeletons");
    pose_track->fallthrough();
    pose_track->add_option("--masks", masks, "mask PGM files or directories")->required();
    pose_track->add_option("--labeled-mask", labeled_mask, "initial labeled PGM")->required();
    pose_track->add_option("--stickman", stickman, "stickman joint sidecar")->required();
    pose_track->add_option("--correct", corrections,
                           "model correction, frame:labels.pgm:stickman.txt");
    pose_cmd->require_subcommand(1);

    auto* fuse_cmd = app.add_subcommand("fuse", "landmark fusion only");
    fuse_cmd->fallthrough();
    fuse_cmd->add_option("--landmarks", landmarks, "landmark CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        SessionConfig cfg;
        if (!config_path.empty())
            cfg = io::parse_config(config_path);
        for (const auto& [key, value] : overrides)
            io::apply_config_entry(cfg, key, value);

        for (int i = 0; i < 3; ++i)
            if (attention_modes[i]->parsed())
                return run_attention(mode_names[i], landmarks, annotation, cfg, out_dir);
        if (gait_analyze->parsed())
            return run_gait(skeletons, cfg, out_dir);
        if (pose_track->parsed())
            return run_pose(masks, labeled_mask, stickman, corrections, cfg, out_dir);
        if (fuse_cmd->parsed())
            return run_fuse(landmarks, cfg, out_dir);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonMonotonicFrames& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MissingField& e) {
        std::cerr << "error: missing field: " << e.what() << "\n";
        return 2;
    } catch (const UnknownTask& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
