#include "braidnav/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace braidnav {

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Control tracking_controller(const Pose& pose, const PathGeometry& path, double desired_speed,
                            const SimConfig& cfg, double progress_hint) {
  Control u;
  u.speed = desired_speed;
  if (desired_speed <= 0.0) return u;

  const double s = path.project(pose.position, progress_hint);
  const Pose ref = path.pose_at(s);
  const Eigen::Vector2d tangent{std::cos(ref.heading), std::sin(ref.heading)};
  const Eigen::Vector2d normal{-tangent.y(), tangent.x()};
  const double e = normal.dot(pose.position - ref.position);  // >0 left of path
  if (std::abs(e) > cfg.capture_radius) {
    throw CaptureRegionError("pose outside the controller capture region");
  }
  const double psi = wrap_angle(pose.heading - ref.heading);
  const double v = std::max(desired_speed, 0.5);
  // Feedforward with a short preview so curvature steps (straight to arc)
  // are anticipated instead of chased.
  const double kappa = path.curvature_at(s + 0.05 * v);

  const double psi_des = std::clamp(-std::atan(cfg.k_cross * e / v), -M_PI / 3.0, M_PI / 3.0);
  const double denom = std::max(1.0 - kappa * e, 0.3);
  const double yaw_rate = desired_speed * kappa * std::cos(psi) / denom +
                          cfg.k_heading * (psi_des - psi);
  u.steering = std::clamp(std::atan(cfg.wheelbase * yaw_rate / v), -cfg.steer_max, cfg.steer_max);
  return u;
}

Pose integrate(const Pose& pose, const Control& u, double dt, const SimConfig& cfg) {
  Pose next = pose;
  next.position.x() += u.speed * std::cos(pose.heading) * dt;
  next.position.y() += u.speed * std::sin(pose.heading) * dt;
  next.heading = wrap_angle(pose.heading + u.speed / cfg.wheelbase * std::tan(u.steering) * dt);
  return next;
}

}  // namespace braidnav
