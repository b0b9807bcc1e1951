#include "braidnav/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "braidnav/plot.hpp"
#include "braidnav/rng.hpp"

namespace braidnav {

Scenario scenario_from_string(const std::string& s) {
  if (s == "s1" || s == "S1") return Scenario::S1;
  if (s == "s2" || s == "S2") return Scenario::S2;
  if (s == "s3" || s == "S3") return Scenario::S3;
  throw ConfigError("unknown scenario '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
  }
  return "?";
}

ScenarioSpec ScenarioSpec::of(Scenario s) {
  ScenarioSpec spec;
  spec.id = s;
  switch (s) {
    case Scenario::S1:
      spec.entries = {Side::bottom, Side::right};
      spec.grid_points = 12;
      break;
    case Scenario::S2:
      spec.entries = {Side::bottom, Side::right, Side::top};
      spec.grid_points = 5;
      break;
    case Scenario::S3:
      spec.entries = {Side::bottom, Side::right, Side::top, Side::left};
      spec.grid_points = 3;
      break;
  }
  return spec;
}

int ScenarioSpec::cells() const {
  int c = 1;
  for (int i = 0; i < agents(); ++i) c *= grid_points;
  return c;
}

std::vector<double> ScenarioSpec::cell_speeds(int cell) const {
  if (cell < 0 || cell >= cells()) throw Error("cell index out of range");
  std::vector<double> speeds(static_cast<std::size_t>(agents()));
  int rem = cell;
  for (int i = agents() - 1; i >= 0; --i) {
    const int digit = rem % grid_points;
    rem /= grid_points;
    speeds[static_cast<std::size_t>(i)] =
        grid_lo + (grid_hi - grid_lo) * static_cast<double>(digit) /
                      static_cast<double>(grid_points - 1);
  }
  return speeds;
}

std::uint64_t experiment_seed(std::uint64_t master, Scenario scenario, int cell) {
  return mix_seed({master, static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(cell)});
}

namespace {

std::vector<AgentSpec> make_agents(const ExperimentSetup& setup, std::uint64_t seed) {
  const ScenarioSpec spec = ScenarioSpec::of(setup.scenario);
  const auto speeds = spec.cell_speeds(setup.cell);
  SplitMix64 rng(seed);
  std::vector<AgentSpec> agents;
  for (int i = 0; i < spec.agents(); ++i) {
    AgentSpec a;
    a.id = i;
    a.entry = spec.entries[static_cast<std::size_t>(i)];
    a.choice = PathChoice::straight;
    a.v_high = speeds[static_cast<std::size_t>(i)];
    a.v_low = setup.config.v_low_ratio * a.v_high;
    a.pref_high = rng.uniform(setup.config.pref_lo, setup.config.pref_hi);
    const bool inattentive =
        setup.condition == Condition::C1 || (setup.heterogeneous && i == 0);
    a.compromise = inattentive ? 1.0 : 0.5;
    a.condition_tag = to_string(setup.condition) + (setup.heterogeneous ? "'" : "");
    agents.push_back(a);
  }
  return agents;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSetup& setup) {
  const std::uint64_t seed = experiment_seed(setup.config.master_seed, setup.scenario, setup.cell);
  std::vector<AgentSpec> agent_specs = make_agents(setup, seed);

  ExperimentResult result;
  result.scenario = setup.scenario;
  result.condition = setup.condition;
  result.heterogeneous = setup.heterogeneous;
  result.cell = setup.cell;
  result.seed = seed;
  for (const auto& a : agent_specs) {
    result.v_high.push_back(a.v_high);
    result.pref_high.push_back(a.pref_high);
  }

  Scene scene(setup.config, std::move(agent_specs));
  const int n = scene.agents();
  const SimConfig& cfg = scene.config();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  result.box_arrival.assign(static_cast<std::size_t>(n), nan);
  result.dest_arrival.assign(static_cast<std::size_t>(n), nan);

  std::vector<double> desired(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) desired[static_cast<std::size_t>(i)] = scene.spec(i).v_high;

  const auto record_sample = [&]() {
    if (!setup.record_trajectory) return;
    result.trajectory.times.push_back(scene.world().time);
    if (result.trajectory.states.empty()) {
      result.trajectory.states.resize(static_cast<std::size_t>(n));
    }
    for (int i = 0; i < n; ++i) {
      result.trajectory.states[static_cast<std::size_t>(i)].push_back(
          scene.world().agents[static_cast<std::size_t>(i)].pose);
    }
  };
  record_sample();

  const int steps_per_cycle =
      std::max(1, static_cast<int>(std::llround(cfg.planning_cycle / cfg.dt)));
  int step_count = 0;

  while (!scene.all_done() && scene.world().time < cfg.timeout - 1e-9) {
    // Decision instant: all negotiating agents re-decide from one snapshot.
    if (step_count % steps_per_cycle == 0) {
      bool any = false;
      for (int i = 0; i < n; ++i) {
        if (scene.world().agents[static_cast<std::size_t>(i)].region == Region::negotiation &&
            scene.spec(i).compromise < 1.0) {
          any = true;
        }
      }
      if (any) {
        RolloutCache cache(scene);
        std::vector<double> next_desired = desired;
        for (int i = 0; i < n; ++i) {
          const AgentState& st = scene.world().agents[static_cast<std::size_t>(i)];
          if (st.region != Region::negotiation) continue;
          if (scene.spec(i).compromise >= 1.0) continue;  // inattentive: holds high
          DecisionTrace trace;
          const SpeedChoice choice = decide(scene, i, PolicyCondition::of(setup.condition), cache,
                                            setup.record_decisions ? &trace : nullptr);
          next_desired[static_cast<std::size_t>(i)] = scene.speed_of(i, choice);
          if (setup.record_decisions) result.decisions.push_back(trace);
        }
        desired = next_desired;
      }
    }
    ++step_count;

    std::vector<Control> controls(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const AgentState& st = scene.world().agents[static_cast<std::size_t>(i)];
      if (st.region == Region::done) continue;
      controls[static_cast<std::size_t>(i)] = tracking_controller(
          st.pose, scene.true_path(i), desired[static_cast<std::size_t>(i)], cfg, st.progress);
    }
    scene.world() = step(scene, scene.world(), controls, cfg.dt);
    record_sample();

    for (int i = 0; i < n; ++i) {
      const AgentState& st = scene.world().agents[static_cast<std::size_t>(i)];
      auto& box_t = result.box_arrival[static_cast<std::size_t>(i)];
      auto& dest_t = result.dest_arrival[static_cast<std::size_t>(i)];
      if (std::isnan(box_t) && st.region != Region::negotiation) box_t = scene.world().time;
      if (std::isnan(dest_t) && st.region == Region::done) dest_t = scene.world().time;
    }

    // Collision metric: rectangle overlap while either member of the pair is
    // in its execution region.
    if (!result.collided) {
      std::vector<std::array<Eigen::Vector2d, 4>> rects;
      rects.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        rects.push_back(car_corners(scene.world().agents[static_cast<std::size_t>(i)].pose,
                                    cfg.geometry));
      }
      for (int i = 0; i < n && !result.collided; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Region ri = scene.world().agents[static_cast<std::size_t>(i)].region;
          const Region rj = scene.world().agents[static_cast<std::size_t>(j)].region;
          if (ri != Region::execution && rj != Region::execution) continue;
          if (rectangles_overlap(rects[static_cast<std::size_t>(i)],
                                 rects[static_cast<std::size_t>(j)])) {
            result.collided = true;
            break;
          }
        }
      }
    }
  }

  if (!scene.all_done()) {
    result.status = RunStatus::timed_out;
    result.max_time = std::numeric_limits<double>::quiet_NaN();
  } else {
    result.status = RunStatus::completed;
    double latest = 0.0;
    for (double t : result.dest_arrival) latest = std::max(latest, t);
    result.max_time = latest;
  }
  return result;
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted.front();
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double bernoulli_stddev(double frequency, int n) {
  if (n <= 0) return 0.0;
  return std::sqrt(frequency * (1.0 - frequency) / static_cast<double>(n));
}

int default_thread_count() {
  if (const char* env = std::getenv("BRAIDNAV_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

ConditionSummary summarize(Condition condition, const std::vector<ExperimentResult>& rows) {
  ConditionSummary s;
  s.condition = condition;
  std::vector<double> times;
  for (const auto& r : rows) {
    if (r.condition != condition) continue;
    ++s.cells;
    if (r.collided) ++s.collisions;
    if (r.status == RunStatus::timed_out) {
      ++s.timeouts;
    } else {
      times.push_back(r.max_time);
    }
  }
  s.frequency = s.cells > 0 ? static_cast<double>(s.collisions) / s.cells : 0.0;
  s.freq_err = bernoulli_stddev(s.frequency, s.cells);
  std::sort(times.begin(), times.end());
  s.time_q25 = percentile(times, 25.0);
  s.time_q50 = percentile(times, 50.0);
  s.time_q75 = percentile(times, 75.0);
  s.time_mean = 0.0;
  for (double t : times) s.time_mean += t;
  if (!times.empty()) s.time_mean /= static_cast<double>(times.size());
  return s;
}

}  // namespace

SweepResult run_sweep(const SweepRequest& request) {
  const ScenarioSpec spec = ScenarioSpec::of(request.scenario);
  struct Job {
    Condition condition;
    int cell;
  };
  std::vector<Job> jobs;
  for (Condition c : request.conditions) {
    for (int cell = 0; cell < spec.cells(); ++cell) jobs.push_back({c, cell});
  }

  std::vector<ExperimentResult> rows(jobs.size());
  std::atomic<std::size_t> cursor{0};
  const int threads = request.threads > 0 ? request.threads : default_thread_count();
  const auto worker = [&]() {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= jobs.size()) return;
      ExperimentSetup setup;
      setup.config = request.config;
      setup.scenario = request.scenario;
      setup.condition = jobs[k].condition;
      setup.heterogeneous = request.heterogeneous;
      setup.cell = jobs[k].cell;
      rows[k] = run_experiment(setup);
    }
  };
  if (threads <= 1 || jobs.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.scenario = request.scenario;
  result.heterogeneous = request.heterogeneous;
  result.rows = std::move(rows);
  for (Condition c : request.conditions) {
    result.summaries.push_back(summarize(c, result.rows));
  }
  return result;
}

void write_results_csv(std::ostream& os, const std::vector<ExperimentResult>& rows) {
  if (rows.empty()) {
    os << "scenario,condition,heterogeneous,cell,seed,collided,status,max_time\n";
    return;
  }
  const std::size_t n = rows.front().v_high.size();
  os << "scenario,condition,heterogeneous,cell,seed";
  for (std::size_t i = 0; i < n; ++i) os << ",v_high_" << (i + 1);
  for (std::size_t i = 0; i < n; ++i) os << ",pref_" << (i + 1);
  os << ",collided,status,max_time";
  for (std::size_t i = 0; i < n; ++i) os << ",box_arrival_" << (i + 1);
  os << "\n";
  char buf[64];
  const auto fmt = [&](double v) {
    if (std::isnan(v)) return std::string("nan");
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    os << to_string(r.scenario) << ',' << to_string(r.condition) << ','
       << (r.heterogeneous ? 1 : 0) << ',' << r.cell << ',' << r.seed;
    for (double v : r.v_high) os << ',' << fmt(v);
    for (double v : r.pref_high) os << ',' << fmt(v);
    os << ',' << (r.collided ? 1 : 0) << ','
       << (r.status == RunStatus::completed ? "completed" : "timeout") << ',' << fmt(r.max_time);
    for (double v : r.box_arrival) os << ',' << fmt(v);
    os << '\n';
  }
}

void write_summary(std::ostream& os, const SweepResult& sweep) {
  os << "scenario " << to_string(sweep.scenario)
     << (sweep.heterogeneous ? " (heterogeneous)" : " (homogeneous)") << "\n";
  char buf[160];
  for (const auto& s : sweep.summaries) {
    std::snprintf(buf, sizeof(buf),
                  "%s%s cells=%d collisions=%d frequency=%.6f err=%.6f timeouts=%d "
                  "time_q25=%.3f time_q50=%.3f time_q75=%.3f time_mean=%.3f\n",
                  to_string(s.condition).c_str(), sweep.heterogeneous ? "'" : "", s.cells,
                  s.collisions, s.frequency, s.freq_err, s.timeouts, s.time_q25, s.time_q50,
                  s.time_q75, s.time_mean);
    os << buf;
  }
}

void write_decision_trace(std::ostream& os, const std::vector<DecisionTrace>& traces) {
  char buf[240];
  for (const auto& t : traces) {
    std::snprintf(buf, sizeof(buf),
                  "{\"time\":%.3f,\"agent\":%d,\"condition\":\"%s\",\"entropy_low\":%.12g,"
                  "\"entropy_high\":%.12g,\"chosen\":\"%s\"}\n",
                  t.time, t.agent + 1, to_string(t.condition).c_str(), t.entropy_low,
                  t.entropy_high, t.chosen == SpeedChoice::high ? "high" : "low");
    os << buf;
  }
}

std::string frequency_chart_svg(const SweepResult& sweep) {
  BarChartSpec spec;
  spec.title = "Frequency of collisions for " + to_string(sweep.scenario) +
               (sweep.heterogeneous ? " (inattentive agent 1)" : "");
  spec.y_label = "frequency of collisions";
  for (const auto& s : sweep.summaries) {
    spec.categories.push_back(to_string(s.condition) + (sweep.heterogeneous ? "'" : ""));
    spec.values.push_back(s.frequency);
    spec.err_low.push_back(std::max(0.0, s.frequency - s.freq_err));
    spec.err_high.push_back(s.frequency + s.freq_err);
  }
  return svg_bar_chart(spec);
}

std::string time_chart_svg(const SweepResult& sweep) {
  BarChartSpec spec;
  spec.title = "Maximum time to destination for " + to_string(sweep.scenario) +
               (sweep.heterogeneous ? " (inattentive agent 1)" : "");
  spec.y_label = "max time to destination (s)";
  for (const auto& s : sweep.summaries) {
    spec.categories.push_back(to_string(s.condition) + (sweep.heterogeneous ? "'" : ""));
    spec.values.push_back(s.time_q50);
    spec.err_low.push_back(s.time_q25);
    spec.err_high.push_back(s.time_q75);
  }
  return svg_bar_chart(spec);
}

}  // namespace braidnav
