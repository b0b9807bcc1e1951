#include <doctest.h>

#include <cmath>
#include <sstream>

#include "braidnav/topology.hpp"
#include "support/crossing_oracle.hpp"
#include "support/smooth_traj.hpp"

using namespace braidnav;
using braidnav::testing::AnalyticSet;
using braidnav::testing::oracle_extract;
using braidnav::testing::random_smooth_set;
using braidnav::testing::sample_set;

namespace {

const ProjectionFrame kXFrame = ProjectionFrame::from_axis({1.0, 0.0});

SystemTrajectory knot_trajectory(const std::vector<double>& times,
                                 const std::vector<std::vector<double>>& xs,
                                 const std::vector<double>& ys) {
  SystemTrajectory traj;
  traj.times = times;
  traj.states.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      traj.states[i].push_back(Pose{{xs[i][k], ys[i]}, 0.0});
    }
  }
  return traj;
}

/// Piecewise-linear 4-agent scene realizing s3 s1 s2^- s3^- s1^-: one swap
/// per unit interval, constant heights chosen to fix each crossing sign.
SystemTrajectory fig5d_trajectory() {
  const std::vector<std::vector<int>> stages = {
      {1, 2, 3, 4}, {1, 2, 4, 3}, {2, 1, 4, 3}, {3, 1, 4, 2}, {4, 1, 3, 2}, {4, 2, 3, 1}};
  // stages[k][agent] = rank of agent after k letters
  std::vector<std::vector<double>> xs(4, std::vector<double>(6));
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t agent = 0; agent < 4; ++agent) {
      xs[agent][k] = static_cast<double>(stages[k][agent]);
    }
  }
  return knot_trajectory({0, 1, 2, 3, 4, 5}, xs, {1.0, 0.0, 3.0, 2.0});
}

}  // namespace

TEST_CASE("stationary agents stay pinned at their ranks") {
  SystemTrajectory traj = knot_trajectory({0, 1, 2}, {{0, 0, 0}, {10, 10, 10}}, {0.0, 1.0});
  const auto strands = normalize_strands(traj, kXFrame);
  for (std::size_t k = 0; k < strands.samples(); ++k) {
    CHECK(strands.raw_point(1, k).x() == doctest::Approx(1.0));
    CHECK(strands.raw_point(2, k).x() == doctest::Approx(2.0));
  }
  CHECK(detect_crossings(strands).empty());
}

TEST_CASE("ratio functions hit their extremes") {
  // Agent 1 spans the whole x extent: scaled curve must cover [1, n] exactly.
  SystemTrajectory traj = knot_trajectory({0, 1, 2}, {{0, 5, 10}, {4, 4, 4}}, {0.0, 1.0});
  const auto strands = normalize_strands(traj, kXFrame);
  CHECK(strands.raw_point(1, 0).x() == doctest::Approx(1.0));
  CHECK(strands.raw_point(1, 2).x() == doctest::Approx(2.0));
}

TEST_CASE("endpoints follow the start and final rankings") {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const AnalyticSet set = random_smooth_set(mix_seed({9000, static_cast<std::uint64_t>(trial)}), n);
    const SystemTrajectory traj = sample_set(set, 200);
    const auto strands = normalize_strands(traj, kXFrame);

    // Independent ranking of the raw projections at both ends.
    std::vector<std::pair<double, int>> first, last;
    for (int i = 0; i < n; ++i) {
      first.push_back({traj.states[static_cast<std::size_t>(i)].front().position.x(), i});
      last.push_back({traj.states[static_cast<std::size_t>(i)].back().position.x(), i});
    }
    std::sort(first.begin(), first.end());
    std::sort(last.begin(), last.end());
    for (int r = 0; r < n; ++r) {
      const int agent_first = first[static_cast<std::size_t>(r)].second + 1;
      const int agent_last = last[static_cast<std::size_t>(r)].second + 1;
      CHECK(strands.point(agent_first, 0) == Eigen::Vector2d{r + 1, 0.0});
      CHECK(strands.point(agent_last, traj.samples() - 1) == Eigen::Vector2d{r + 1, 0.0});
      CHECK(strands.final_ranks().image(strands.start_ranks().image(agent_last)) == r + 1);
    }
  }
}

TEST_CASE("two crossing lines give one event at the analytic intersection") {
  // x1 = t, x2 = 4 - t in frame-x: crossing at t = 2 (normalized 0.5).
  AnalyticSet set;
  set.t0 = 0.0;
  set.t1 = 4.0;
  set.fx = {[](double t) { return t; }, [](double t) { return 4.0 - t; }};
  set.fy = {[](double) { return 1.0; }, [](double) { return -1.0; }};
  const SystemTrajectory traj = sample_set(set, 41);
  const auto events = detect_crossings(normalize_strands(traj, kXFrame));
  REQUIRE(events.size() == 1);
  CHECK(events[0].time == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(events[0].rank == 1);
  // Ascending strand (agent 1, lower x before) has the greater height.
  CHECK(events[0].sign == 1);
}

TEST_CASE("parallel strands produce no events") {
  SystemTrajectory traj = knot_trajectory({0, 1, 2, 3}, {{0, 1, 2, 3}, {5, 6, 7, 8}}, {0.0, 1.0});
  CHECK(detect_crossings(normalize_strands(traj, kXFrame)).empty());
  CHECK(extract_braid(traj, kXFrame).empty());
}

TEST_CASE("grazing contact is not a crossing") {
  // Difference touches zero at the middle sample and returns with the same sign.
  AnalyticSet set;
  set.t0 = -1.0;
  set.t1 = 1.0;
  set.fx = {[](double t) { return t * t; }, [](double) { return 0.0; }};
  set.fy = {[](double) { return 1.0; }, [](double) { return -1.0; }};
  const SystemTrajectory traj = sample_set(set, 21);  // includes t = 0 exactly
  CHECK(detect_crossings(normalize_strands(traj, kXFrame)).empty());
}

TEST_CASE("single two-agent crossing yields sigma_1 and its mirror the inverse") {
  const SystemTrajectory traj =
      knot_trajectory({0, 1, 2}, {{1, 1.4, 2}, {2, 1.6, 1}}, {1.0, 0.0});
  const BraidWord w = extract_braid(traj, kXFrame);
  CHECK(to_text(w) == "1");

  SystemTrajectory mirrored = traj;
  for (auto& row : mirrored.states) {
    for (auto& p : row) p.position.y() = -p.position.y();
  }
  const BraidWord m = extract_braid(mirrored, kXFrame);
  CHECK(to_text(m) == "-1");
  CHECK(are_equal(compose(w, m), BraidWord(2)));
}

TEST_CASE("constructed four-agent scene matches the five-letter pattern and the oracle") {
  const SystemTrajectory traj = fig5d_trajectory();
  const BraidWord w = extract_braid(traj, kXFrame);
  CHECK(to_text(w) == "3 1 -2 -3 -1");

  AnalyticSet set;
  set.t0 = 0.0;
  set.t1 = 5.0;
  for (int i = 0; i < 4; ++i) {
    set.fx.push_back([&traj, i](double t) {
      const auto& xs = traj.states[static_cast<std::size_t>(i)];
      const std::size_t k =
          std::min(static_cast<std::size_t>(std::floor(t)), xs.size() - 2);
      const double frac = t - static_cast<double>(k);
      return xs[k].position.x() * (1 - frac) + xs[k + 1].position.x() * frac;
    });
    set.fy.push_back(
        [&traj, i](double) { return traj.states[static_cast<std::size_t>(i)][0].position.y(); });
  }
  CHECK(are_equal(w, oracle_extract(set, 5000)));
}

TEST_CASE("extraction matches the brute-force oracle on random smooth sets") {
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const AnalyticSet set = random_smooth_set(mix_seed({123, static_cast<std::uint64_t>(trial)}), n);
    const SystemTrajectory traj = sample_set(set, 400);
    const BraidWord extracted = extract_braid(traj, kXFrame);
    const BraidWord expected = oracle_extract(set, 4000);
    CHECK(are_equal(extracted, expected));
  }
}

TEST_CASE("invariance under reparametrization, scaling and translation") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 3;
    const AnalyticSet set = random_smooth_set(mix_seed({321, static_cast<std::uint64_t>(trial)}), n);
    const SystemTrajectory base = sample_set(set, 400);
    const BraidWord w = extract_braid(base, kXFrame);

    // Strictly monotonic time warp: resample the curve at t0 + span * u^2.
    AnalyticSet warped = set;
    for (int i = 0; i < n; ++i) {
      const auto fx = set.fx[static_cast<std::size_t>(i)];
      const auto fy = set.fy[static_cast<std::size_t>(i)];
      const double t0 = set.t0, span = set.t1 - set.t0;
      warped.fx[static_cast<std::size_t>(i)] = [fx, t0, span](double t) {
        const double u = (t - t0) / span;
        return fx(t0 + span * u * u);
      };
      warped.fy[static_cast<std::size_t>(i)] = [fy, t0, span](double t) {
        const double u = (t - t0) / span;
        return fy(t0 + span * u * u);
      };
    }
    CHECK(are_equal(w, extract_braid(sample_set(warped, 1400), kXFrame)));

    SystemTrajectory scaled = base;
    for (auto& row : scaled.states) {
      for (auto& p : row) p.position = 3.5 * p.position + Eigen::Vector2d{-7.0, 11.0};
    }
    CHECK(are_equal(w, extract_braid(scaled, kXFrame)));
  }
}

TEST_CASE("stationary padding never changes the word") {
  for (int trial = 0; trial < 10; ++trial) {
    const AnalyticSet set = random_smooth_set(mix_seed({77, static_cast<std::uint64_t>(trial)}), 3);
    SystemTrajectory traj = sample_set(set, 300);
    const BraidWord w = extract_braid(traj, kXFrame);
    const double t_end = traj.times.back();
    for (int k = 1; k <= 5; ++k) {
      traj.times.push_back(t_end + k);
      for (auto& row : traj.states) row.push_back(row.back());
    }
    CHECK(are_equal(w, extract_braid(traj, kXFrame)));
  }
}

TEST_CASE("extraction permutation equals the endpoint ranking permutation") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const AnalyticSet set = random_smooth_set(mix_seed({555, static_cast<std::uint64_t>(trial)}), n);
    const SystemTrajectory traj = sample_set(set, 400);
    const auto strands = normalize_strands(traj, kXFrame);
    CHECK(permutation_of(extract_braid(traj, kXFrame)) == strands.final_ranks());
  }
}

TEST_CASE("degenerate extent is an error") {
  SystemTrajectory traj = knot_trajectory({0, 1, 2}, {{5, 5, 5}, {5, 5, 5}}, {0.0, 1.0});
  CHECK_THROWS_AS(normalize_strands(traj, kXFrame), DegenerateExtentError);
}

TEST_CASE("coincident strands at a crossing are an error") {
  // Same heights: the crossing cannot be resolved into over/under.
  SystemTrajectory traj = knot_trajectory({0, 1, 2}, {{1, 1.4, 2}, {2, 1.6, 1}}, {0.5, 0.5});
  CHECK_THROWS_AS(detect_crossings(normalize_strands(traj, kXFrame)), DegenerateCrossingError);
}

TEST_CASE("trajectory log round-trips and validates") {
  const AnalyticSet set = random_smooth_set(42, 3);
  const SystemTrajectory traj = sample_set(set, 50);
  std::stringstream ss;
  write_trajectory_log(ss, traj);
  const SystemTrajectory back = read_trajectory_log(ss);
  REQUIRE(back.agents() == traj.agents());
  REQUIRE(back.samples() == traj.samples());
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    CHECK(back.times[k] == traj.times[k]);
    for (int i = 0; i < traj.agents(); ++i) {
      CHECK(back.states[static_cast<std::size_t>(i)][k].position ==
            traj.states[static_cast<std::size_t>(i)][k].position);
    }
  }

  std::stringstream bad("0 1 2 3\n0 1 2 3\n");
  CHECK_THROWS_AS(read_trajectory_log(bad), TrajectoryFormatError);
  std::stringstream short_rec("0 1 2\n");
  CHECK_THROWS_AS(read_trajectory_log(short_rec), TrajectoryFormatError);
}
