#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <vector>

#include "braidnav/braid.hpp"
#include "braidnav/errors.hpp"

namespace braidnav {

struct Pose {
  Eigen::Vector2d position{0.0, 0.0};
  double heading = 0.0;
};

/// Spatiotemporal projection plane, fixed by its spatial axis. The braid an
/// observer extracts depends on this choice; each agent uses its own.
struct ProjectionFrame {
  Eigen::Vector2d eta{1.0, 0.0};  // unit vector

  static ProjectionFrame from_axis(const Eigen::Vector2d& axis);

  /// Perpendicular axis (+90 degree rotation of eta); resolves crossing signs.
  Eigen::Vector2d perp() const { return {-eta.y(), eta.x()}; }

  double x_of(const Eigen::Vector2d& p) const { return eta.dot(p); }
  double y_of(const Eigen::Vector2d& p) const { return perp().dot(p); }
};

/// Time-indexed poses of all agents over one execution. Agents that finish
/// early are padded stationary, so all per-agent series share the grid.
struct SystemTrajectory {
  std::vector<double> times;
  std::vector<std::vector<Pose>> states;  // [agent][sample]

  int agents() const { return static_cast<int>(states.size()); }
  std::size_t samples() const { return times.size(); }
  void validate() const;
};

/// One strand transposition: strands at ranks (rank, rank+1) swap at `time`
/// (normalized to [0,1]); sign follows the perpendicular-axis order.
struct CrossingEvent {
  double time;
  int rank;
  int sign;
};

/// Trajectory curves mapped into braid-strand form: spatial axis scaled to
/// [1, n], perpendicular axis to [-1, 1], time to [0, 1], with endpoints
/// pinned to the start/final rank permutations.
class NormalizedStrands {
 public:
  int agents() const { return static_cast<int>(raw_.size()); }
  std::size_t samples() const { return abscissa_.size(); }
  const std::vector<double>& abscissa() const { return abscissa_; }

  /// Strand point for 1-based agent at a sample; endpoints snapped to
  /// (start_rank, 0) and (final_rank, 0).
  Eigen::Vector2d point(int agent, std::size_t sample) const;

  /// Interior (unsnapped) scaled point, valid at every sample.
  const Eigen::Vector2d& raw_point(int agent, std::size_t sample) const {
    return raw_[static_cast<std::size_t>(agent - 1)][sample];
  }

  /// Rank of agent (1-based) in the t=0 ordering by frame-x.
  const Permutation& start_ranks() const { return start_ranks_; }
  /// Maps t=0 rank to t=t_inf rank.
  const Permutation& final_ranks() const { return final_ranks_; }

  friend NormalizedStrands normalize_strands(const SystemTrajectory&, const ProjectionFrame&);

 private:
  std::vector<double> abscissa_;
  std::vector<std::vector<Eigen::Vector2d>> raw_;
  Permutation start_ranks_{1};
  Permutation final_ranks_{1};
};

NormalizedStrands normalize_strands(const SystemTrajectory& traj, const ProjectionFrame& frame);

/// Locate every swap of the frame-x order between adjacent ranks, by linear
/// interpolation between samples. Events come back sorted by time; exact
/// ties on overlapping rank pairs are rejected as degenerate.
std::vector<CrossingEvent> detect_crossings(const NormalizedStrands& strands);

/// Braid word of the execution under the given frame: crossings in temporal
/// order, one letter each.
BraidWord extract_braid(const SystemTrajectory& traj, const ProjectionFrame& frame);

/// Line-delimited log: one record per timestep with time and each agent's
/// (x, y, theta) in world meters/radians. '#' lines are comments.
void write_trajectory_log(std::ostream& os, const SystemTrajectory& traj);
SystemTrajectory read_trajectory_log(std::istream& is);

}  // namespace braidnav
