#include "braidnav/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace braidnav {

namespace {

Eigen::Vector2d rot90ccw(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }
Eigen::Vector2d rot90cw(const Eigen::Vector2d& v) { return {v.y(), -v.x()}; }
double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Side side_from_string(const std::string& s) {
  if (s == "bottom") return Side::bottom;
  if (s == "right") return Side::right;
  if (s == "top") return Side::top;
  if (s == "left") return Side::left;
  throw ConfigError("unknown side '" + s + "'");
}

std::string to_string(Side s) {
  switch (s) {
    case Side::bottom: return "bottom";
    case Side::right: return "right";
    case Side::top: return "top";
    case Side::left: return "left";
  }
  return "?";
}

std::string to_string(PathChoice c) {
  switch (c) {
    case PathChoice::left: return "left";
    case PathChoice::straight: return "straight";
    case PathChoice::right: return "right";
  }
  return "?";
}

Side destination_of(Side entry, PathChoice choice) {
  const int offset = choice == PathChoice::right ? 1 : (choice == PathChoice::straight ? 2 : 3);
  return static_cast<Side>((static_cast<int>(entry) + offset) % 4);
}

Eigen::Vector2d IntersectionGeometry::entry_heading(Side s) const {
  switch (s) {
    case Side::bottom: return {0.0, 1.0};
    case Side::right: return {-1.0, 0.0};
    case Side::top: return {0.0, -1.0};
    case Side::left: return {1.0, 0.0};
  }
  return {0.0, 1.0};
}

Eigen::Vector2d IntersectionGeometry::entry_box_point(Side s) const {
  // Right-hand traffic: inbound lane center sits half a lane to the right of
  // the road axis, looking along the travel direction.
  const Eigen::Vector2d h = entry_heading(s);
  const Eigen::Vector2d right = rot90cw(h);
  return -h * half_box() + right * half_lane();
}

Pose IntersectionGeometry::entry_pose(Side s) const {
  const Eigen::Vector2d h = entry_heading(s);
  Pose p;
  p.position = entry_box_point(s) - h * lane_length;
  p.heading = std::atan2(h.y(), h.x());
  return p;
}

Eigen::Vector2d IntersectionGeometry::exit_heading(Side s) const {
  return -entry_heading(s);  // outbound direction through side s
}

Eigen::Vector2d IntersectionGeometry::exit_box_point(Side s) const {
  const Eigen::Vector2d h = exit_heading(s);
  const Eigen::Vector2d right = rot90cw(h);
  return h * half_box() + right * half_lane();
}

Pose IntersectionGeometry::exit_pose(Side s) const {
  const Eigen::Vector2d h = exit_heading(s);
  Pose p;
  p.position = exit_box_point(s) + h * lane_length;
  p.heading = std::atan2(h.y(), h.x());
  return p;
}

Eigen::Vector2d PathGeometry::point_at(double s) const {
  s = std::clamp(s, 0.0, length_);
  for (const auto& seg : segments_) {
    if (s <= seg.length || &seg == &segments_.back()) {
      if (!seg.is_arc) return seg.start + seg.dir * s;
      const double a = seg.angle0 + seg.sweep * (s / seg.length);
      return seg.center + seg.radius * Eigen::Vector2d{std::cos(a), std::sin(a)};
    }
    s -= seg.length;
  }
  return segments_.back().start;
}

double PathGeometry::heading_at(double s) const {
  s = std::clamp(s, 0.0, length_);
  for (const auto& seg : segments_) {
    if (s <= seg.length || &seg == &segments_.back()) {
      if (!seg.is_arc) return std::atan2(seg.dir.y(), seg.dir.x());
      const double a = seg.angle0 + seg.sweep * (std::min(s, seg.length) / seg.length);
      const double sgn = seg.sweep >= 0.0 ? 1.0 : -1.0;
      return wrap_angle(a + sgn * M_PI / 2.0);
    }
    s -= seg.length;
  }
  return 0.0;
}

Pose PathGeometry::pose_at(double s) const {
  return Pose{point_at(s), heading_at(s)};
}

double PathGeometry::curvature_at(double s) const {
  s = std::clamp(s, 0.0, length_);
  for (const auto& seg : segments_) {
    if (s <= seg.length || &seg == &segments_.back()) {
      if (!seg.is_arc) return 0.0;
      return (seg.sweep >= 0.0 ? 1.0 : -1.0) / seg.radius;
    }
    s -= seg.length;
  }
  return 0.0;
}

double PathGeometry::project(const Eigen::Vector2d& p, double hint, double backtrack) const {
  const double lo = std::max(0.0, hint - backtrack);
  double best_s = lo;
  double best_d = std::numeric_limits<double>::infinity();
  double seg_start = 0.0;
  for (const auto& seg : segments_) {
    const double seg_end = seg_start + seg.length;
    if (seg_end >= lo) {
      double s_local;
      if (!seg.is_arc) {
        s_local = std::clamp(seg.dir.dot(p - seg.start), 0.0, seg.length);
      } else {
        const Eigen::Vector2d rel = p - seg.center;
        double ang = std::atan2(rel.y(), rel.x());
        // Parameter along the arc, clamped to its angular range.
        double u = wrap_angle(ang - seg.angle0) / seg.sweep;
        u = std::clamp(u, 0.0, 1.0);
        s_local = u * seg.length;
      }
      const double s_global = std::clamp(seg_start + s_local, lo, length_);
      const double d = (point_at(s_global) - p).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best_s = s_global;
      }
    }
    seg_start = seg_end;
  }
  return best_s;
}

PathGeometry build_path(const IntersectionGeometry& geom, Side from, Side to) {
  if (from == to) throw Error("no path connects a side to itself (no U-turns)");
  PathGeometry path;
  path.from_ = from;
  path.to_ = to;
  path.entry_mark_ = geom.lane_length;

  const Eigen::Vector2d d1 = geom.entry_heading(from);
  const Eigen::Vector2d start = geom.entry_pose(from).position;
  const Eigen::Vector2d box_in = geom.entry_box_point(from);

  if (destination_of(from, PathChoice::straight) == to) {
    PathGeometry::Segment seg;
    seg.is_arc = false;
    seg.start = start;
    seg.dir = d1;
    seg.length = 2.0 * geom.lane_length + geom.box_width();
    path.segments_ = {seg};
    path.length_ = seg.length;
    return path;
  }

  const bool left_turn = destination_of(from, PathChoice::left) == to;
  const double turn = left_turn ? 1.0 : -1.0;
  const Eigen::Vector2d d2 = geom.exit_heading(to);
  const Eigen::Vector2d box_out = geom.exit_box_point(to);
  const Eigen::Vector2d n1 = left_turn ? rot90ccw(d1) : rot90cw(d1);
  const Eigen::Vector2d n2 = left_turn ? rot90ccw(d2) : rot90cw(d2);

  // Fillet radius from tangency to both centerlines: the arc starts at the
  // box edge on the inbound lane and ends on the outbound centerline.
  const double denom = cross2(n1 - n2, d2);
  if (std::abs(denom) < 1e-12) throw Error("degenerate turn construction");
  const double r = -cross2(box_in - box_out, d2) / denom;
  if (r <= 0.0) throw Error("turn fillet radius must be positive");

  const Eigen::Vector2d center = box_in + r * n1;
  const Eigen::Vector2d t2 = center - r * n2;
  const double a0 = std::atan2((box_in - center).y(), (box_in - center).x());
  const double a1 = std::atan2((t2 - center).y(), (t2 - center).x());
  double sweep = wrap_angle(a1 - a0);
  if (turn > 0.0 && sweep < 0.0) sweep += 2.0 * M_PI;
  if (turn < 0.0 && sweep > 0.0) sweep -= 2.0 * M_PI;

  PathGeometry::Segment in;
  in.is_arc = false;
  in.start = start;
  in.dir = d1;
  in.length = geom.lane_length;

  PathGeometry::Segment arc;
  arc.is_arc = true;
  arc.center = center;
  arc.radius = r;
  arc.angle0 = a0;
  arc.sweep = sweep;
  arc.length = std::abs(sweep) * r;

  PathGeometry::Segment out;
  out.is_arc = false;
  out.start = t2;
  out.dir = d2;
  out.length = (geom.exit_pose(to).position - t2).norm();

  path.segments_ = {in, arc, out};
  path.length_ = in.length + arc.length + out.length;
  return path;
}

std::array<Eigen::Vector2d, 4> car_corners(const Pose& pose, const IntersectionGeometry& geom) {
  const Eigen::Vector2d f{std::cos(pose.heading), std::sin(pose.heading)};
  const Eigen::Vector2d l = rot90ccw(f);
  const Eigen::Vector2d hf = f * (geom.car_length / 2.0);
  const Eigen::Vector2d hl = l * (geom.car_width / 2.0);
  return {pose.position + hf + hl, pose.position - hf + hl, pose.position - hf - hl,
          pose.position + hf - hl};
}

namespace {

bool separating_axis(const std::array<Eigen::Vector2d, 4>& a,
                     const std::array<Eigen::Vector2d, 4>& b) {
  for (int e = 0; e < 4; ++e) {
    const Eigen::Vector2d edge = a[static_cast<std::size_t>((e + 1) % 4)] - a[static_cast<std::size_t>(e)];
    const Eigen::Vector2d axis{-edge.y(), edge.x()};
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (const auto& p : a) {
      const double v = axis.dot(p);
      amin = std::min(amin, v);
      amax = std::max(amax, v);
    }
    for (const auto& p : b) {
      const double v = axis.dot(p);
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    if (amax < bmin || bmax < amin) return true;
  }
  return false;
}

double segment_distance(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const auto point_seg = [](const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                            const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * ab)).norm();
  };
  const double d1 = cross2(p2 - p1, q1 - p1);
  const double d2 = cross2(p2 - p1, q2 - p1);
  const double d3 = cross2(q2 - q1, p1 - q1);
  const double d4 = cross2(q2 - q1, p2 - q1);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;  // proper intersection
  return std::min(std::min(point_seg(p1, q1, q2), point_seg(p2, q1, q2)),
                  std::min(point_seg(q1, p1, p2), point_seg(q2, p1, p2)));
}

}  // namespace

bool rectangles_overlap(const std::array<Eigen::Vector2d, 4>& a,
                        const std::array<Eigen::Vector2d, 4>& b) {
  return !separating_axis(a, b) && !separating_axis(b, a);
}

double min_rectangle_distance(const std::array<Eigen::Vector2d, 4>& a,
                              const std::array<Eigen::Vector2d, 4>& b) {
  if (rectangles_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, segment_distance(a[static_cast<std::size_t>(i)],
                                             a[static_cast<std::size_t>((i + 1) % 4)],
                                             b[static_cast<std::size_t>(j)],
                                             b[static_cast<std::size_t>((j + 1) % 4)]));
    }
  }
  return best;
}

}  // namespace braidnav
