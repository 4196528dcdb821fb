#include "aosikit/asymmetry.hpp"

#include <algorithm>
#include <cmath>

namespace aosikit::gait {

namespace {

constexpr const char* kJointNames[kJointCount] = {
    "head", "neck", "l_shoulder", "l_elbow", "l_wrist",
    "r_shoulder", "r_elbow", "r_wrist", "pelvis",
    "l_hip", "l_knee", "l_ankle", "r_hip", "r_knee", "r_ankle",
};

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

// Unsigned angle between two vectors, degrees in [0, 180].
double angle_between(Point2D a, Point2D b) {
    const double c = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
    return std::acos(c) * kRadToDeg;
}

struct SideAngles {
    double u, e, f;
};

SideAngles side_angles(Point2D shoulder, Point2D elbow, Point2D wrist, bool mirror) {
    Point2D v_u = elbow - shoulder;
    Point2D v_f = wrist - elbow;
    if ((v_u.x == 0 && v_u.y == 0) || (v_f.x == 0 && v_f.y == 0))
        throw ZeroLengthSegment("arm segment has zero length");
    if (mirror) {
        v_u.x = -v_u.x;
        v_f.x = -v_f.x;
    }
    SideAngles out;
    out.u = angle_between(v_u, {0.0, 1.0});  // vs vertical, down = 0 (y-down)
    out.e = angle_between(v_u, v_f);
    // Global forearm angle vs the horizontal axis, up positive. Folding the
    // x component keeps the value in the 1st/4th quadrants.
    out.f = std::atan2(-v_f.y, std::abs(v_f.x)) * kRadToDeg;
    return out;
}

}  // namespace

const char* joint_name(Joint j) { return kJointNames[static_cast<int>(j)]; }

std::optional<Joint> joint_from_name(const std::string& name) {
    for (int i = 0; i < kJointCount; ++i)
        if (name == kJointNames[i])
            return static_cast<Joint>(i);
    return std::nullopt;
}

ArmAngles arm_angles(const Skeleton2D& sk) {
    const SideAngles l = side_angles(sk[Joint::l_shoulder], sk[Joint::l_elbow],
                                     sk[Joint::l_wrist], /*mirror=*/false);
    const SideAngles r = side_angles(sk[Joint::r_shoulder], sk[Joint::r_elbow],
                                     sk[Joint::r_wrist], /*mirror=*/true);
    return {l.u, r.u, l.e, r.e, l.f, r.f};
}

double asymmetry_score(double alpha_deg, double tau_deg, double sigma_deg) {
    return 2.0 / (1.0 + std::exp(-(alpha_deg - tau_deg) / sigma_deg));
}

ArmScores as_star(const ArmAngles& angles, double tau_deg, double sigma_deg) {
    ArmScores out;
    out.as_u = asymmetry_score(std::abs(angles.u_l - angles.u_r), tau_deg, sigma_deg);
    out.as_f = asymmetry_score(std::abs(angles.e_l - angles.e_r), tau_deg, sigma_deg);
    out.as_star = std::max(out.as_u, out.as_f);
    return out;
}

double ad_f(const ArmAngles& angles) {
    return std::abs(angles.f_l - angles.f_r);
}

bool frame_asymmetric(double as_star, double ad_f, double as_star_min,
                      double ad_f_min_deg) {
    return as_star >= as_star_min && ad_f >= ad_f_min_deg;
}

AsymmetryFrame analyze_frame(const Skeleton2D& sk, const AsymmetryParams& params) {
    const ArmAngles angles = arm_angles(sk);
    const ArmScores scores = as_star(angles, params.tau_deg, params.sigma_deg);
    AsymmetryFrame out;
    out.as_u = scores.as_u;
    out.as_f = scores.as_f;
    out.as_star = scores.as_star;
    out.ad_f = ad_f(angles);
    out.asymmetric = frame_asymmetric(out.as_star, out.ad_f, params.as_star_min,
                                      params.ad_f_min_deg);
    return out;
}

double static_symmetry(const std::vector<bool>& flags) {
    if (flags.empty())
        throw EmptySequence("no asymmetry flags");
    const auto count = std::count(flags.begin(), flags.end(), true);
    return 100.0 * static_cast<double>(count) / static_cast<double>(flags.size());
}

double dynamic_symmetry(const std::vector<bool>& flags, double fps) {
    if (flags.empty())
        throw EmptySequence("no asymmetry flags");
    const std::size_t w = std::max<std::size_t>(1, std::llround(fps / 2.0));
    std::size_t windows = 0, asymmetric = 0;
    for (std::size_t begin = 0; begin < flags.size(); begin += w) {
        const std::size_t end = std::min(begin + w, flags.size());
        ++windows;
        for (std::size_t i = begin; i < end; ++i) {
            if (flags[i]) {
                ++asymmetric;
                break;
            }
        }
    }
    return 100.0 * static_cast<double>(asymmetric) / static_cast<double>(windows);
}

}  // namespace aosikit::gait
