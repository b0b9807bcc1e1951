#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "braidnav/geometry.hpp"

namespace braidnav {

/// Agent as configured for one experiment. compromise = 1 marks the
/// inattentive variant (tracks its path at its preferred speed, ignoring
/// everyone).
struct AgentSpec {
  int id = 0;
  Side entry = Side::bottom;
  PathChoice choice = PathChoice::straight;
  double v_low = 2.5;
  double v_high = 5.0;
  double pref_high = 0.7;  // true preference for the high speed, in [0.6, 0.8]
  double compromise = 0.5; // w in (0, 1]
  std::string condition_tag;
};

struct SimConfig {
  IntersectionGeometry geometry;

  // integration / scheduling
  double dt = 0.05;               // simulation step (s)
  double planning_cycle = 0.25;   // decision period during negotiation (s)
  double rollout_dt = 0.1;        // hypothesis rollout step (s)
  double rollout_horizon = 60.0;  // rollout cap (s)
  double timeout = 120.0;         // experiment cap (s)

  // vehicle / controller
  double wheelbase = 2.7;
  double steer_max = 1.1;        // rad; must admit the tight legal right turn
  double k_cross = 1.2;
  double k_heading = 6.0;
  double capture_radius = 5.0;   // m

  // inference
  double sigmoid_rate = 10.0;      // a (1/m)
  double sigmoid_threshold = 0.5;  // delta (m), boundary-to-boundary
  double assumed_pref = -1.0;      // <0: each agent projects its own pref_high
  double entropy_tie_tol = 1e-9;

  // experiment harness
  double v_low_ratio = 0.5;   // v_low = ratio * v_high
  double pref_lo = 0.6;
  double pref_hi = 0.8;
  std::uint64_t master_seed = 2026;

  /// Agents for a custom (non-S1/S2/S3) run; empty otherwise.
  std::vector<AgentSpec> agents;
};

/// Partial-override load: absent keys keep their defaults.
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);

}  // namespace braidnav
