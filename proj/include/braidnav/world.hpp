#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "braidnav/braid.hpp"
#include "braidnav/config.hpp"
#include "braidnav/geometry.hpp"
#include "braidnav/topology.hpp"
#include "braidnav/vehicle.hpp"

namespace braidnav {

enum class Region { negotiation = 0, execution = 1, done = 2 };
enum class SpeedChoice { low = 0, high = 1 };

struct AgentState {
  Pose pose;
  double speed = 0.0;     // commanded speed currently tracked
  double progress = 0.0;  // arc length along the (true) path
  Region region = Region::negotiation;
};

/// Immutable snapshot of the system; step() returns a successor.
struct WorldState {
  double time = 0.0;
  std::vector<AgentState> agents;
};

/// Static experiment context: geometry, configuration, agent specs, the
/// three candidate paths per agent, and each agent's projection frame.
class Scene {
 public:
  Scene(SimConfig cfg, std::vector<AgentSpec> specs);

  int agents() const { return static_cast<int>(specs_.size()); }
  const SimConfig& config() const { return cfg_; }
  const AgentSpec& spec(int i) const { return specs_[static_cast<std::size_t>(i)]; }
  const PathGeometry& candidate_path(int i, PathChoice c) const {
    return paths_[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  }
  const PathGeometry& true_path(int i) const { return candidate_path(i, spec(i).choice); }
  /// Spatial axis of agent i's projection plane: its entry heading rotated
  /// 90 degrees clockwise (the driver's right).
  const ProjectionFrame& frame_of(int i) const { return frames_[static_cast<std::size_t>(i)]; }

  double speed_of(int i, SpeedChoice u) const {
    return u == SpeedChoice::high ? spec(i).v_high : spec(i).v_low;
  }

  const WorldState& world() const { return world_; }
  WorldState& world() { return world_; }

  bool all_done() const;
  /// Initial state: every agent at its path start, tracking its high speed.
  static WorldState initial_state(const Scene& scene);

 private:
  SimConfig cfg_;
  std::vector<AgentSpec> specs_;
  std::vector<std::array<PathGeometry, 3>> paths_;
  std::vector<ProjectionFrame> frames_;
  WorldState world_;
};

/// Advance one Euler step; identical inputs give bit-identical successors.
WorldState step(const Scene& scene, const WorldState& world, const std::vector<Control>& controls,
                double dt);

/// One agent's future under a fixed (path, commanded speed), on the grid
/// t_k = k * rollout_dt from the snapshot time. Poses stop extending once
/// the agent parks at the path end; pose_at clamps.
struct SingleRollout {
  std::vector<Pose> poses;
  std::size_t done_step = SIZE_MAX;  // SIZE_MAX: still moving at the horizon cap

  const Pose& pose_at(std::size_t k) const {
    return poses[std::min(k, poses.size() - 1)];
  }
  std::size_t steps() const { return poses.size() - 1; }
};

SingleRollout rollout_single(const Scene& scene, int agent, PathChoice choice, double speed_cmd);

/// Joint hypothesis: a path choice and a speed choice per agent.
struct HypTuple {
  std::vector<PathChoice> paths;
  std::vector<SpeedChoice> speeds;

  std::uint32_t encode() const;
};

/// Minimum boundary-to-boundary distance between any two car rectangles in
/// the world; +infinity with fewer than two agents.
double min_distance(const Scene& scene, const WorldState& world);

struct RolloutOutcome {
  SystemTrajectory trajectory;
  double d_min = 0.0;
};

/// Forward-simulate all agents from the current state along hypothesis
/// (T, U) at constant commanded speeds until everyone parks (capped by
/// rollout_horizon); collisions are measured through d_min, never fatal.
RolloutOutcome rollout(const Scene& scene, const HypTuple& hyp);

/// Per-planning-cycle store: single-agent traversals and per-hypothesis
/// evaluations (d_min, braid keys per observer frame), shared by every
/// deciding agent within the cycle.
class RolloutCache {
 public:
  explicit RolloutCache(const Scene& scene);

  const SingleRollout& single(int agent, PathChoice c, SpeedChoice u);
  double d_min(const HypTuple& hyp);
  /// Braid of the hypothesis future in `observer`'s frame.
  const BraidKey& braid_key(const HypTuple& hyp, int observer);

 private:
  struct Eval {
    double d_min = 0.0;
    std::size_t steps = 0;
    std::vector<std::optional<BraidKey>> keys_by_frame;
  };
  Eval& eval_of(const HypTuple& hyp);

  const Scene& scene_;
  std::vector<std::array<std::array<std::unique_ptr<SingleRollout>, 2>, 3>> singles_;
  std::map<std::uint32_t, Eval> evals_;
};

}  // namespace braidnav
