#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "braidnav/belief.hpp"
#include "braidnav/topology.hpp"

using namespace braidnav;

namespace {

Scene make_scene(std::vector<Side> entries, std::vector<double> v_high,
                 std::vector<double> prefs, SimConfig cfg = {}) {
  std::vector<AgentSpec> specs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    AgentSpec a;
    a.id = static_cast<int>(i);
    a.entry = entries[i];
    a.choice = PathChoice::straight;
    a.v_high = v_high[i];
    a.v_low = 0.5 * a.v_high;
    a.pref_high = prefs[i];
    specs.push_back(a);
  }
  return Scene(std::move(cfg), std::move(specs));
}

void advance(Scene& scene, double seconds, const std::vector<double>& speeds) {
  const SimConfig& cfg = scene.config();
  const int steps = static_cast<int>(std::llround(seconds / cfg.dt));
  for (int k = 0; k < steps; ++k) {
    std::vector<Control> controls(static_cast<std::size_t>(scene.agents()));
    for (int i = 0; i < scene.agents(); ++i) {
      const AgentState& st = scene.world().agents[static_cast<std::size_t>(i)];
      if (st.region == Region::done) continue;
      controls[static_cast<std::size_t>(i)] = tracking_controller(
          st.pose, scene.true_path(i), speeds[static_cast<std::size_t>(i)], cfg, st.progress);
    }
    scene.world() = step(scene, scene.world(), controls, cfg.dt);
  }
}

Belief from_masses(const std::vector<double>& masses) {
  Belief bel;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    BraidKey key;
    key.strands = 2;
    key.coords = {static_cast<std::int64_t>(i)};
    bel.entries[Outcome{key, true}] = masses[i];
  }
  return bel;
}

}  // namespace

TEST_CASE("path prior: uniform in negotiation, point mass in execution") {
  Scene scene = make_scene({Side::bottom, Side::right}, {8.0, 8.0}, {0.7, 0.7});
  auto prior = path_prior(scene, 0, 1, false);
  CHECK(prior == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});

  // Drive agent 1 into the intersection.
  advance(scene, 7.0, {8.0, 8.0});
  CHECK(scene.world().agents[1].region == Region::execution);
  prior = path_prior(scene, 0, 1, false);
  CHECK(prior[static_cast<std::size_t>(PathChoice::straight)] == 1.0);
  CHECK(prior[0] + prior[1] + prior[2] == 1.0);

  CHECK_THROWS_AS(path_prior(scene, 0, 0, false), Error);
}

TEST_CASE("known-paths prior is a point mass regardless of region") {
  Scene scene = make_scene({Side::bottom, Side::right}, {8.0, 8.0}, {0.7, 0.7});
  const auto prior = path_prior(scene, 0, 1, true);
  CHECK(prior[static_cast<std::size_t>(PathChoice::straight)] == 1.0);
}

TEST_CASE("control prior") {
  CHECK(control_prior_high(0.7) == 0.7);
  CHECK(1.0 - control_prior_high(0.7) == doctest::Approx(0.3));
  CHECK_THROWS_AS(control_prior_high(1.5), Error);
}

TEST_CASE("ego action conditioning is a point mass in the enumeration") {
  Scene scene = make_scene({Side::bottom, Side::right}, {8.0, 8.0}, {0.7, 0.7});
  BeliefOptions opt;
  opt.ego = 0;
  opt.ego_action = SpeedChoice::low;
  for (const auto& h : enumerate_hypotheses(scene, opt)) {
    CHECK(h.tuple.speeds[0] == SpeedChoice::low);
  }
}

TEST_CASE("collision probability: sigmoid landmarks and monotonicity") {
  CHECK(collision_probability(0.5, 10.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(collision_probability(std::numeric_limits<double>::infinity(), 10.0, 0.5) == 0.0);
  const double d75 = 0.5 - std::log(3.0) / 10.0;
  CHECK(collision_probability(d75, 10.0, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
  double prev = 1.1;
  for (double d = 0.0; d < 3.0; d += 0.05) {
    const double p = collision_probability(d, 10.0, 0.5);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("single-agent belief is a point mass on the empty braid") {
  Scene scene = make_scene({Side::bottom}, {8.0}, {0.7});
  RolloutCache cache(scene);
  BeliefOptions opt;
  opt.ego = 0;
  const Belief bel = compute_belief(scene, opt, cache);
  REQUIRE(bel.entries.size() == 1);
  const auto& [outcome, p] = *bel.entries.begin();
  CHECK(outcome.collision_free);
  CHECK(outcome.key == canonical_key(BraidWord(1)));
  CHECK(p == 1.0);
  CHECK(entropy(bel) == 0.0);
}

TEST_CASE("hypothesis counts collapse under conditioning and known paths") {
  Scene scene = make_scene({Side::bottom, Side::right}, {8.0, 8.0}, {0.7, 0.7});
  BeliefOptions opt;
  opt.ego = 0;
  CHECK(enumerate_hypotheses(scene, opt).size() == 3 * 4);  // 3 paths x 2^2 speeds
  opt.known_paths = true;
  CHECK(enumerate_hypotheses(scene, opt).size() == 4);
  opt.ego_action = SpeedChoice::high;
  CHECK(enumerate_hypotheses(scene, opt).size() == 2);
  opt.known_paths = false;
  CHECK(enumerate_hypotheses(scene, opt).size() == 3 * 2);
}

TEST_CASE("belief equals an independent direct-summation oracle") {
  // Full 4-agent product at the symmetric cell: 27 path tuples x 16 profiles.
  Scene scene = make_scene({Side::bottom, Side::right, Side::top, Side::left},
                           {7.5, 7.5, 7.5, 7.5}, {0.63, 0.71, 0.77, 0.66});
  advance(scene, 1.0, {7.5, 7.5, 7.5, 7.5});
  RolloutCache cache(scene);
  BeliefOptions opt;
  opt.ego = 0;
  std::vector<HypothesisRecord> diag;
  const Belief bel = compute_belief(scene, opt, cache, &diag);
  CHECK(diag.size() == 432);
  CHECK(bel.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

  // Oracle: raw nested loops, independent prior arithmetic, direct rollout()
  // calls, no cache, no enumeration helper.
  std::map<Outcome, double> oracle;
  const double assumed = scene.spec(0).pref_high;  // ego projects its own preference
  for (int p1 = 0; p1 < 3; ++p1) {
    for (int p2 = 0; p2 < 3; ++p2) {
      for (int p3 = 0; p3 < 3; ++p3) {
        for (int u = 0; u < 16; ++u) {
          HypTuple hyp;
          hyp.paths = {PathChoice::straight, static_cast<PathChoice>(p1),
                       static_cast<PathChoice>(p2), static_cast<PathChoice>(p3)};
          hyp.speeds.resize(4);
          double prior = 1.0 / 27.0;
          for (int j = 0; j < 4; ++j) {
            const bool high = (u >> j) & 1;
            hyp.speeds[static_cast<std::size_t>(j)] = high ? SpeedChoice::high : SpeedChoice::low;
            prior *= high ? assumed : (1.0 - assumed);
          }
          const RolloutOutcome ro = rollout(scene, hyp);
          const double pc = collision_probability(ro.d_min, scene.config().sigmoid_rate,
                                                  scene.config().sigmoid_threshold);
          const BraidKey key = canonical_key(extract_braid(ro.trajectory, scene.frame_of(0)));
          if (prior * (1.0 - pc) > 0.0) oracle[Outcome{key, true}] += prior * (1.0 - pc);
          if (prior * pc > 0.0) oracle[Outcome{key, false}] += prior * pc;
        }
      }
    }
  }
  REQUIRE(bel.entries.size() == oracle.size());
  auto it = bel.entries.begin();
  for (const auto& [outcome, p] : oracle) {
    CHECK(it->first == outcome);
    CHECK(it->second == doctest::Approx(p).epsilon(1e-12));
    ++it;
  }
}

TEST_CASE("normalization holds mid-run and under conditioning") {
  Scene scene = make_scene({Side::bottom, Side::right, Side::top}, {9.0, 6.0, 7.0},
                           {0.61, 0.79, 0.7});
  for (int stage = 0; stage < 4; ++stage) {
    RolloutCache cache(scene);
    for (int ego = 0; ego < 3; ++ego) {
      for (auto action : {std::optional<SpeedChoice>{}, std::optional{SpeedChoice::low},
                          std::optional{SpeedChoice::high}}) {
        BeliefOptions opt;
        opt.ego = ego;
        opt.ego_action = action;
        const Belief bel = compute_belief(scene, opt, cache);
        CHECK(std::abs(bel.total_mass() - 1.0) <= 1e-9);
      }
    }
    advance(scene, 1.5, {9.0, 6.0, 7.0});
  }
}

TEST_CASE("conditioned beliefs mix back to the unconditioned belief") {
  Scene scene = make_scene({Side::bottom, Side::right}, {8.0, 7.0}, {0.64, 0.72});
  advance(scene, 0.5, {8.0, 7.0});
  RolloutCache cache(scene);
  BeliefOptions opt;
  opt.ego = 0;
  const Belief full = compute_belief(scene, opt, cache);
  opt.ego_action = SpeedChoice::low;
  const Belief low = compute_belief(scene, opt, cache);
  opt.ego_action = SpeedChoice::high;
  const Belief high = compute_belief(scene, opt, cache);

  const double p_high = scene.spec(0).pref_high;
  std::map<Outcome, double> mixed;
  for (const auto& [o, p] : low.entries) mixed[o] += (1.0 - p_high) * p;
  for (const auto& [o, p] : high.entries) mixed[o] += p_high * p;
  REQUIRE(mixed.size() == full.entries.size());
  auto it = full.entries.begin();
  for (const auto& [o, p] : mixed) {
    CHECK(it->first == o);
    CHECK(it->second == doctest::Approx(p).epsilon(1e-12));
    ++it;
  }
}

TEST_CASE("equal-braid hypotheses merge into one outcome") {
  // Opposite parallel lanes: speeds cannot change the passing topology, so
  // collision-free mass from all four profiles lands on one braid key.
  Scene scene = make_scene({Side::bottom, Side::top}, {6.0, 6.0}, {0.7, 0.7});
  RolloutCache cache(scene);
  BeliefOptions opt;
  opt.ego = 0;
  opt.known_paths = true;
  const Belief bel = compute_belief(scene, opt, cache);
  int collision_free_outcomes = 0;
  for (const auto& [o, p] : bel.entries) {
    if (o.collision_free) ++collision_free_outcomes;
  }
  CHECK(collision_free_outcomes < 4);
  CHECK(bel.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy: point mass, uniform, analytic mixture") {
  CHECK(entropy(from_masses({1.0})) == 0.0);
  for (int k : {2, 3, 8}) {
    CHECK(entropy(from_masses(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k))) ==
          doctest::Approx(std::log(k)).epsilon(1e-12));
  }
  CHECK(entropy(from_masses({0.25, 0.25, 0.5})) ==
        doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
  CHECK(entropy(from_masses({1.0, 0.0})) == 0.0);  // 0 log 0 = 0
}

TEST_CASE("entropy bounds on computed beliefs") {
  Scene scene = make_scene({Side::bottom, Side::right, Side::top}, {7.0, 7.0, 7.0},
                           {0.7, 0.7, 0.7});
  advance(scene, 2.0, {7.0, 7.0, 7.0});
  RolloutCache cache(scene);
  BeliefOptions opt;
  opt.ego = 1;
  const Belief bel = compute_belief(scene, opt, cache);
  const double h = entropy(bel);
  CHECK(h >= 0.0);
  CHECK(h <= std::log(static_cast<double>(bel.entries.size())) + 1e-12);
}
