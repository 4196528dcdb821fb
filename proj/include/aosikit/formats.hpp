#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aosikit/attention.hpp"
#include "aosikit/config.hpp"
#include "aosikit/fusion.hpp"

// Text file formats.
//
//   landmarks CSV   header `frame,feature,src,x,y,w,h,score`; src is trk or
//                   det; x,y are box centers in pixels. Rows grouped by
//                   frame, frame numbers non-decreasing within a group and
//                   strictly increasing across groups.
//   annotation      `key = value` lines, `#` comments. Keys: task, fps,
//                   presentation_frame, target_side, contact_frame and
//                   repeated `interval = <R|L|stationary> <begin> <end>`.
//   skeletons CSV   header `frame,<joint>_x,<joint>_y,...` for the 15
//                   joints in canonical order; every joint required.
//   stickman        `<joint> = <x> <y>` lines, one per joint.
//   config          `key = value` lines mirroring SessionConfig.
//
// Doubles are written in shortest round-trip form, so emit-then-parse is
// lossless.

namespace aosikit::io {

std::string format_double(double v);

// Generic `key = value` reader (order preserved, keys may repeat).
std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path);

std::vector<fusion::FrameObservations> parse_landmarks(const std::filesystem::path& path);
void write_landmarks(const std::filesystem::path& path,
                     std::span<const fusion::FrameObservations> frames);

attention::TrialAnnotation parse_annotation(const std::filesystem::path& path);
void write_annotation(const std::filesystem::path& path,
                      const attention::TrialAnnotation& ann);

struct SkeletonSequence {
    std::vector<int> frames;
    std::vector<gait::Skeleton2D> skeletons;
};

SkeletonSequence read_skeletons(const std::filesystem::path& path);
void write_skeletons(const std::filesystem::path& path, const SkeletonSequence& seq);

gait::Skeleton2D read_stickman(const std::filesystem::path& path);
void write_stickman(const std::filesystem::path& path, const gait::Skeleton2D& sk);

// Unknown keys and malformed values raise ParseError.
void apply_config_entry(SessionConfig& cfg, const std::string& key,
                        const std::string& value);
SessionConfig parse_config(const std::filesystem::path& path);

}  // namespace aosikit::io
