#include "braidnav/planner.hpp"

#include <cmath>

namespace braidnav {

Condition condition_from_string(const std::string& s) {
  if (s == "c1" || s == "C1") return Condition::C1;
  if (s == "c2" || s == "C2") return Condition::C2;
  if (s == "c3" || s == "C3") return Condition::C3;
  if (s == "c4" || s == "C4") return Condition::C4;
  if (s == "c5" || s == "C5") return Condition::C5;
  throw ConfigError("unknown condition '" + s + "'");
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::C1: return "C1";
    case Condition::C2: return "C2";
    case Condition::C3: return "C3";
    case Condition::C4: return "C4";
    case Condition::C5: return "C5";
  }
  return "?";
}

PolicyCondition PolicyCondition::of(Condition c) {
  PolicyCondition p;
  p.tag = c;
  p.knows_paths = (c == Condition::C3 || c == Condition::C5);
  p.topological = (c == Condition::C2 || c == Condition::C3);
  return p;
}

SpeedChoice tie_break(double entropy_low, double entropy_high, double tol) {
  if (std::abs(entropy_low - entropy_high) <= tol) return SpeedChoice::high;
  return entropy_low < entropy_high ? SpeedChoice::low : SpeedChoice::high;
}

namespace {

/// Entropy of the emerging collision-free mode distribution conditioned on
/// the candidate ego speed (C2/C3).
double braid_objective(const Scene& scene, int ego, bool knows_paths, SpeedChoice action,
                       RolloutCache& cache) {
  BeliefOptions opt;
  opt.ego = ego;
  opt.ego_action = action;
  opt.known_paths = knows_paths;
  const Belief bel = compute_belief(scene, opt, cache);
  return entropy(bel.collision_free_restriction());
}

/// Trajectory-level objective (C4/C5): every hypothesis is its own outcome,
/// weighted by its collision-free mass; no clustering.
double trajectory_objective(const Scene& scene, int ego, bool knows_paths, SpeedChoice action,
                            RolloutCache& cache) {
  BeliefOptions opt;
  opt.ego = ego;
  opt.ego_action = action;
  opt.known_paths = knows_paths;
  const auto hypotheses = enumerate_hypotheses(scene, opt);
  double h = 0.0;
  for (const auto& hyp : hypotheses) {
    const double pc = collision_probability(cache.d_min(hyp.tuple), scene.config().sigmoid_rate,
                                            scene.config().sigmoid_threshold);
    const double mass = hyp.prior * (1.0 - pc);
    if (mass > 0.0) h -= mass * std::log(mass);
  }
  return h;
}

}  // namespace

SpeedChoice decide(const Scene& scene, int ego, const PolicyCondition& policy,
                   RolloutCache& cache, DecisionTrace* trace) {
  SpeedChoice chosen = SpeedChoice::high;
  double h_low = 0.0, h_high = 0.0;
  if (policy.tag != Condition::C1) {
    if (policy.topological) {
      h_low = braid_objective(scene, ego, policy.knows_paths, SpeedChoice::low, cache);
      h_high = braid_objective(scene, ego, policy.knows_paths, SpeedChoice::high, cache);
    } else {
      h_low = trajectory_objective(scene, ego, policy.knows_paths, SpeedChoice::low, cache);
      h_high = trajectory_objective(scene, ego, policy.knows_paths, SpeedChoice::high, cache);
    }
    chosen = tie_break(h_low, h_high, scene.config().entropy_tie_tol);
  }
  if (trace) {
    trace->time = scene.world().time;
    trace->agent = ego;
    trace->condition = policy.tag;
    trace->entropy_low = h_low;
    trace->entropy_high = h_high;
    trace->chosen = chosen;
  }
  return chosen;
}

}  // namespace braidnav
