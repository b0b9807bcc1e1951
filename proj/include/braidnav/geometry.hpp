#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "braidnav/errors.hpp"
#include "braidnav/topology.hpp"

namespace braidnav {

enum class Side { bottom = 0, right = 1, top = 2, left = 3 };
enum class PathChoice { left = 0, straight = 1, right = 2 };

Side side_from_string(const std::string& s);
std::string to_string(Side s);
std::string to_string(PathChoice c);

/// Destination side reached from `entry` under a turn choice (right-hand traffic).
Side destination_of(Side entry, PathChoice choice);

/// Symmetric 4-way unsignalized intersection. The central box is the
/// 2-lane x 2-lane square; lanes extend lane_length from its edges.
struct IntersectionGeometry {
  double lane_length = 50.0;
  double lane_width = 3.6;
  double car_length = 4.7;
  double car_width = 1.7;

  double half_box() const { return lane_width; }             // 3.6
  double box_width() const { return 2.0 * lane_width; }      // 7.2
  double half_lane() const { return lane_width / 2.0; }      // 1.8

  /// Inbound lane direction for a side (pointing at the intersection).
  Eigen::Vector2d entry_heading(Side s) const;
  /// Pose at the far end of the inbound lane (where agents start).
  Pose entry_pose(Side s) const;
  /// Point where the inbound lane centerline meets the box edge.
  Eigen::Vector2d entry_box_point(Side s) const;
  /// Point where the outbound lane centerline leaves the box edge.
  Eigen::Vector2d exit_box_point(Side s) const;
  Eigen::Vector2d exit_heading(Side s) const;
  /// Pose at the far end of the outbound lane (destination).
  Pose exit_pose(Side s) const;
};

/// Arc-length parameterized centerline: straight for opposite sides,
/// straight - circular arc - straight for turns, the arc tangent to both
/// lane centerlines inside the box.
class PathGeometry {
 public:
  struct Segment {
    bool is_arc = false;
    // straight
    Eigen::Vector2d start{0, 0};
    Eigen::Vector2d dir{1, 0};
    // arc
    Eigen::Vector2d center{0, 0};
    double radius = 0.0;
    double angle0 = 0.0;
    double sweep = 0.0;  // signed; positive = counterclockwise (left turn)
    double length = 0.0;
  };

  Side from_side() const { return from_; }
  Side to_side() const { return to_; }
  double length() const { return length_; }
  /// Arc length at which the intersection box begins (end of negotiation).
  double entry_mark() const { return entry_mark_; }

  Eigen::Vector2d point_at(double s) const;
  double heading_at(double s) const;
  Pose pose_at(double s) const;
  /// Signed curvature (positive = left) at arc length s.
  double curvature_at(double s) const;

  /// Arc length of the nearest path point, searching from `hint` forward
  /// (never returns less than hint - backtrack).
  double project(const Eigen::Vector2d& p, double hint, double backtrack = 2.0) const;

  const std::vector<Segment>& segments() const { return segments_; }

  friend PathGeometry build_path(const IntersectionGeometry&, Side, Side);

 private:
  Side from_ = Side::bottom;
  Side to_ = Side::top;
  double length_ = 0.0;
  double entry_mark_ = 0.0;
  std::vector<Segment> segments_;
};

PathGeometry build_path(const IntersectionGeometry& geom, Side from, Side to);

/// Oriented car rectangle; corners in counterclockwise order.
std::array<Eigen::Vector2d, 4> car_corners(const Pose& pose, const IntersectionGeometry& geom);

bool rectangles_overlap(const std::array<Eigen::Vector2d, 4>& a,
                        const std::array<Eigen::Vector2d, 4>& b);

/// Minimum Euclidean distance between rectangle boundaries; 0 when they
/// overlap or touch.
double min_rectangle_distance(const std::array<Eigen::Vector2d, 4>& a,
                              const std::array<Eigen::Vector2d, 4>& b);

}  // namespace braidnav
