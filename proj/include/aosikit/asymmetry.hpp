#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aosikit/types.hpp"

// Arm asymmetry measures from a 2D stickman skeleton.
//
// Per frame: upper-arm global angles vs the vertical axis (u), relative
// elbow angles (e) and forearm global angles vs the horizontal axis (f),
// left and right. Angle differences feed a sigmoid score AS(alpha) in
// (0, 2) crossing 1.0 at the 45-degree threshold; AS* is the max of the
// upper-arm and forearm scores, AD_f the absolute forearm-angle
// difference. A frame counts as asymmetric only when AS* >= 1 and
// AD_f >= 45 agree. Sequences aggregate to Static Symmetry (percent of
// asymmetric frames) and Dynamic Symmetry (percent of asymmetric
// half-second windows).

namespace aosikit::gait {

enum class Joint {
    head = 0, neck, l_shoulder, l_elbow, l_wrist,
    r_shoulder, r_elbow, r_wrist, pelvis,
    l_hip, l_knee, l_ankle, r_hip, r_knee, r_ankle,
};
inline constexpr int kJointCount = 15;

const char* joint_name(Joint j);
std::optional<Joint> joint_from_name(const std::string& name);

struct Skeleton2D {
    std::array<Point2D, kJointCount> joints{};

    Point2D& operator[](Joint j) { return joints[static_cast<int>(j)]; }
    Point2D operator[](Joint j) const { return joints[static_cast<int>(j)]; }
};

struct ArmAngles {
    double u_l = 0, u_r = 0;  // degrees in [0, 180], 0 = straight down
    double e_l = 0, e_r = 0;  // degrees in [0, 180], 0 = straight arm
    double f_l = 0, f_r = 0;  // degrees in [-90, 90], up positive
};

struct ArmScores {
    double as_u = 0, as_f = 0, as_star = 0;
};

struct AsymmetryFrame {
    double as_u = 0, as_f = 0, as_star = 0;  // in (0, 2)
    double ad_f = 0;                         // degrees in [0, 180]
    bool asymmetric = false;
};

struct AsymmetryParams {
    double tau_deg = 45.0;
    double sigma_deg = 15.0;  // tau / 3
    double as_star_min = 1.0;
    double ad_f_min_deg = 45.0;
};

// Mirrored arm angles. Right-side limb vectors have their x components
// negated so both sides share lateral orientation; global angles then live
// in the 1st/4th quadrants. Throws ZeroLengthSegment.
ArmAngles arm_angles(const Skeleton2D& sk);

// Sigmoid asymmetry score 2 / (1 + exp(-(alpha - tau) / sigma)).
double asymmetry_score(double alpha_deg, double tau_deg = 45.0,
                       double sigma_deg = 15.0);

// Upper-arm and relative-elbow angle differences through the sigmoid;
// as_star is their max.
ArmScores as_star(const ArmAngles& angles, double tau_deg = 45.0,
                  double sigma_deg = 15.0);

// Absolute difference of the forearm global angles, in [0, 180].
double ad_f(const ArmAngles& angles);

// Strict conjunction: both AS* and AD_f must flag.
bool frame_asymmetric(double as_star, double ad_f, double as_star_min = 1.0,
                      double ad_f_min_deg = 45.0);

AsymmetryFrame analyze_frame(const Skeleton2D& sk, const AsymmetryParams& params = {});

// Percent of asymmetric frames. Throws EmptySequence.
double static_symmetry(const std::vector<bool>& flags);

// Percent of asymmetric windows of round(fps/2) frames; a window is
// asymmetric if any frame in it is; the trailing partial window counts.
// Throws EmptySequence.
double dynamic_symmetry(const std::vector<bool>& flags, double fps);

}  // namespace aosikit::gait
