#pragma once

#include "braidnav/config.hpp"
#include "braidnav/geometry.hpp"
#include "braidnav/topology.hpp"

namespace braidnav {

struct Control {
  double speed = 0.0;     // m/s, commanded directly (kinematic model)
  double steering = 0.0;  // rad, saturated to config.steer_max
};

/// Path-tracking feedback law: holds the commanded speed and steers so the
/// cross-track error decays exponentially; exact curvature feedforward on
/// the path. Throws CaptureRegionError when the pose is too far off.
Control tracking_controller(const Pose& pose, const PathGeometry& path, double desired_speed,
                            const SimConfig& cfg, double progress_hint = 0.0);

/// Euler step of the simple-car kinematics
///   x' = v cos(theta), y' = v sin(theta), theta' = (v/L) tan(steering).
Pose integrate(const Pose& pose, const Control& u, double dt, const SimConfig& cfg);

}  // namespace braidnav
