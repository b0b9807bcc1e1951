#include "braidnav/belief.hpp"

#include <cmath>

#include "braidnav/topology.hpp"

namespace braidnav {

double Belief::total_mass() const {
  double total = 0.0;
  for (const auto& [outcome, p] : entries) total += p;
  return total;
}

Belief Belief::collision_free_restriction() const {
  Belief out;
  for (const auto& [outcome, p] : entries) {
    if (outcome.collision_free) out.entries.emplace(outcome, p);
  }
  return out;
}

double entropy(const Belief& bel) {
  double h = 0.0;
  for (const auto& [outcome, p] : bel.entries) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<double> path_prior(const Scene& scene, int ego, int j, bool known_paths) {
  if (j == ego) throw Error("path_prior is a model of other agents only");
  const AgentState& st = scene.world().agents[static_cast<std::size_t>(j)];
  std::vector<double> prior(3, 0.0);
  if (!known_paths && st.region == Region::negotiation) {
    prior.assign(3, 1.0 / 3.0);
  } else {
    // The path becomes obvious the moment the agent enters the intersection.
    prior[static_cast<std::size_t>(scene.spec(j).choice)] = 1.0;
  }
  return prior;
}

double control_prior_high(double assumed_pref) {
  if (assumed_pref < 0.0 || assumed_pref > 1.0) throw Error("preference must be a probability");
  return assumed_pref;
}

double collision_probability(double d_min, double rate, double threshold) {
  if (rate <= 0.0) throw Error("sigmoid rate must be positive");
  if (threshold < 0.0) throw Error("sigmoid threshold must be nonnegative");
  if (std::isinf(d_min)) return 0.0;
  return 1.0 / (1.0 + std::exp(rate * (d_min - threshold)));
}

namespace {

/// The model every agent projects onto the others ("same preferences as
/// mine" unless the config pins a fixed value).
double assumed_pref_of(const Scene& scene, int ego) {
  const double fixed = scene.config().assumed_pref;
  return fixed >= 0.0 ? fixed : scene.spec(ego).pref_high;
}

}  // namespace

std::vector<Hypothesis> enumerate_hypotheses(const Scene& scene, const BeliefOptions& opt) {
  const int n = scene.agents();
  const double pref = assumed_pref_of(scene, opt.ego);

  // Path support per agent (ego pinned to its own path).
  std::vector<std::vector<std::pair<PathChoice, double>>> path_support(
      static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& sup = path_support[static_cast<std::size_t>(j)];
    if (j == opt.ego) {
      sup.push_back({scene.spec(j).choice, 1.0});
      continue;
    }
    const auto prior = path_prior(scene, opt.ego, j, opt.known_paths);
    for (int c = 0; c < 3; ++c) {
      if (prior[static_cast<std::size_t>(c)] > 0.0) {
        sup.push_back({static_cast<PathChoice>(c), prior[static_cast<std::size_t>(c)]});
      }
    }
  }

  // Speed support: the ego is either conditioned to a point mass or weighted
  // by its own true preference; everyone else by the assumed preference.
  std::vector<std::vector<std::pair<SpeedChoice, double>>> speed_support(
      static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& sup = speed_support[static_cast<std::size_t>(j)];
    if (j == opt.ego && opt.ego_action) {
      sup.push_back({*opt.ego_action, 1.0});
    } else {
      const double p_high = (j == opt.ego) ? scene.spec(j).pref_high : control_prior_high(pref);
      sup.push_back({SpeedChoice::low, 1.0 - p_high});
      sup.push_back({SpeedChoice::high, p_high});
    }
  }

  std::vector<Hypothesis> out;
  Hypothesis h;
  h.tuple.paths.resize(static_cast<std::size_t>(n));
  h.tuple.speeds.resize(static_cast<std::size_t>(n));

  // Depth-first product over path supports, then speed supports.
  std::vector<std::size_t> pidx(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> sidx(static_cast<std::size_t>(n), 0);
  const auto emit = [&]() {
    double prior = 1.0;
    for (int j = 0; j < n; ++j) {
      const auto& ps = path_support[static_cast<std::size_t>(j)][pidx[static_cast<std::size_t>(j)]];
      const auto& ss = speed_support[static_cast<std::size_t>(j)][sidx[static_cast<std::size_t>(j)]];
      h.tuple.paths[static_cast<std::size_t>(j)] = ps.first;
      h.tuple.speeds[static_cast<std::size_t>(j)] = ss.first;
      prior *= ps.second * ss.second;
    }
    h.prior = prior;
    out.push_back(h);
  };
  // Odometer over the mixed-radix index vector (paths then speeds).
  while (true) {
    while (true) {
      emit();
      int j = 0;
      for (; j < n; ++j) {
        auto& idx = sidx[static_cast<std::size_t>(j)];
        if (++idx < speed_support[static_cast<std::size_t>(j)].size()) break;
        idx = 0;
      }
      if (j == n) break;
    }
    int j = 0;
    for (; j < n; ++j) {
      auto& idx = pidx[static_cast<std::size_t>(j)];
      if (++idx < path_support[static_cast<std::size_t>(j)].size()) break;
      idx = 0;
    }
    if (j == n) break;
  }
  return out;
}

Belief compute_belief(const Scene& scene, const BeliefOptions& opt, RolloutCache& cache,
                      std::vector<HypothesisRecord>* diagnostics, int* skipped) {
  const auto hypotheses = enumerate_hypotheses(scene, opt);
  const double rate = scene.config().sigmoid_rate;
  const double threshold = scene.config().sigmoid_threshold;

  Belief bel;
  double kept_mass = 0.0;
  int skip_count = 0;
  for (const auto& hyp : hypotheses) {
    const double dm = cache.d_min(hyp.tuple);
    const double pc = collision_probability(dm, rate, threshold);
    BraidKey key;
    try {
      key = cache.braid_key(hyp.tuple, opt.ego);
    } catch (const DegenerateCrossingError&) {
      ++skip_count;
      continue;
    }
    const double free_mass = hyp.prior * (1.0 - pc);
    const double hit_mass = hyp.prior * pc;
    if (free_mass > 0.0) bel.entries[Outcome{key, true}] += free_mass;
    if (hit_mass > 0.0) bel.entries[Outcome{key, false}] += hit_mass;
    kept_mass += hyp.prior;
    if (diagnostics) {
      HypothesisRecord rec;
      rec.tuple = hyp.tuple;
      rec.prior = hyp.prior;
      rec.d_min = dm;
      rec.collision_prob = pc;
      rec.braid = key.to_string();
      diagnostics->push_back(std::move(rec));
    }
  }
  if (skipped) *skipped = skip_count;
  if (kept_mass <= 0.0) throw Error("every hypothesis degenerated; no belief");
  if (skip_count > 0) {
    for (auto& [outcome, p] : bel.entries) p /= kept_mass;
  }
  const double total = bel.total_mass();
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("belief mass " + std::to_string(total) + " violates normalization");
  }
  return bel;
}

}  // namespace braidnav
