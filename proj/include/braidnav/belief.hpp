#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "braidnav/braid.hpp"
#include "braidnav/world.hpp"

namespace braidnav {

/// Joint event (topological mode, collision flag). The collision-free pair
/// is the planner's object of interest; the colliding complement keeps the
/// full measure normalized.
struct Outcome {
  BraidKey key;
  bool collision_free = true;

  auto operator<=>(const Outcome&) const = default;
};

/// Normalized distribution over outcomes (full measure sums to 1).
struct Belief {
  std::map<Outcome, double> entries;

  double total_mass() const;
  /// Sub-measure of collision-free joint events (not renormalized).
  Belief collision_free_restriction() const;
};

/// Shannon entropy (nats) over the entry masses, with 0 log 0 = 0. Applied
/// to the collision-free restriction this is the planner's objective.
double entropy(const Belief& bel);

/// Distribution over agent j's three path choices from the ego's viewpoint:
/// uniform while j negotiates, a point mass on the true path once j is in
/// the intersection. j must not be the ego (the ego knows its own path).
std::vector<double> path_prior(const Scene& scene, int ego, int j, bool known_paths);

/// P(high) for the two-speed action set: other agents are modeled with
/// `assumed_pref`, which nobody can observe.
double control_prior_high(double assumed_pref);

/// Sigmoid collision model 1 / (1 + exp(rate * (d_min - threshold))),
/// strictly decreasing in d_min; 0 at the +infinity sentinel.
double collision_probability(double d_min, double rate, double threshold);

struct BeliefOptions {
  int ego = 0;
  std::optional<SpeedChoice> ego_action;  // conditioning used by the planner
  bool known_paths = false;               // point-mass path priors everywhere
};

struct Hypothesis {
  HypTuple tuple;
  double prior = 0.0;
};

/// All (system path, control profile) hypotheses with nonzero prior for the
/// ego's belief; priors sum to 1.
std::vector<Hypothesis> enumerate_hypotheses(const Scene& scene, const BeliefOptions& opt);

/// Per-hypothesis diagnostic row emitted by compute_belief on request.
struct HypothesisRecord {
  HypTuple tuple;
  double prior = 0.0;
  double d_min = 0.0;
  double collision_prob = 0.0;
  std::string braid;
};

/// Exhaustive enumeration, rollout and classification of every hypothesis;
/// the returned full measure sums to 1 within 1e-9 (checked). Hypotheses
/// whose extraction degenerates are skipped and the remaining mass is
/// renormalized; the skip count is reported through `skipped`.
Belief compute_belief(const Scene& scene, const BeliefOptions& opt, RolloutCache& cache,
                      std::vector<HypothesisRecord>* diagnostics = nullptr,
                      int* skipped = nullptr);

}  // namespace braidnav
