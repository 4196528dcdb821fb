#pragma once

#include "aosikit/asymmetry.hpp"
#include "aosikit/attention.hpp"
#include "aosikit/csm.hpp"
#include "aosikit/fusion.hpp"

namespace aosikit {

// Everything tunable in one place; the report echoes it so runs can be
// reproduced.
struct SessionConfig {
    double fps = 30.0;
    attention::DetectionParams detection;
    gait::AsymmetryParams asymmetry;
    csm::CsmConfig csm;
    fusion::FusionConfig fusion;
};

}  // namespace aosikit
