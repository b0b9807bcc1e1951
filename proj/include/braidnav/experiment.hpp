#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "braidnav/config.hpp"
#include "braidnav/planner.hpp"
#include "braidnav/world.hpp"

namespace braidnav {

enum class Scenario { S1 = 1, S2 = 2, S3 = 3 };

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

/// Scenario definitions: straight crossings with per-agent speed grids on
/// [5, 10] m/s; the grid product enumerates the experiment cells.
struct ScenarioSpec {
  Scenario id = Scenario::S1;
  std::vector<Side> entries;
  int grid_points = 12;
  double grid_lo = 5.0;
  double grid_hi = 10.0;

  static ScenarioSpec of(Scenario s);
  int agents() const { return static_cast<int>(entries.size()); }
  int cells() const;
  /// Per-agent high speed for a cell index (mixed-radix decode).
  std::vector<double> cell_speeds(int cell) const;
};

enum class RunStatus { completed = 0, timed_out = 1 };

struct ExperimentSetup {
  SimConfig config;
  Scenario scenario = Scenario::S1;
  Condition condition = Condition::C1;
  bool heterogeneous = false;  // agent 1 replaced by an inattentive agent
  int cell = 0;
  bool record_trajectory = false;
  bool record_decisions = false;
};

struct ExperimentResult {
  Scenario scenario = Scenario::S1;
  Condition condition = Condition::C1;
  bool heterogeneous = false;
  int cell = 0;
  std::uint64_t seed = 0;
  std::vector<double> v_high;
  std::vector<double> pref_high;
  bool collided = false;
  RunStatus status = RunStatus::completed;
  double max_time = 0.0;                  // latest destination arrival (s)
  std::vector<double> box_arrival;        // intersection arrival per agent
  std::vector<double> dest_arrival;
  SystemTrajectory trajectory;            // when recorded
  std::vector<DecisionTrace> decisions;   // when recorded
};

ExperimentResult run_experiment(const ExperimentSetup& setup);

/// The experiment (cell speeds + sampled preferences) is shared across
/// conditions and the heterogeneous variant; only the master seed, scenario
/// and cell feed it.
std::uint64_t experiment_seed(std::uint64_t master, Scenario scenario, int cell);

struct ConditionSummary {
  Condition condition = Condition::C1;
  int cells = 0;
  int collisions = 0;
  int timeouts = 0;
  double frequency = 0.0;  // fraction of cells with a collision
  double freq_err = 0.0;   // Bernoulli standard deviation of the mean
  double time_q25 = 0.0, time_q50 = 0.0, time_q75 = 0.0;
  double time_mean = 0.0;  // over completed cells
};

struct SweepRequest {
  SimConfig config;
  Scenario scenario = Scenario::S1;
  std::vector<Condition> conditions;
  bool heterogeneous = false;
  int threads = 0;  // 0: BRAIDNAV_THREADS env var, else hardware concurrency
};

struct SweepResult {
  Scenario scenario = Scenario::S1;
  bool heterogeneous = false;
  std::vector<ExperimentResult> rows;        // ordered by (condition, cell)
  std::vector<ConditionSummary> summaries;
};

SweepResult run_sweep(const SweepRequest& request);

/// Linear-interpolated percentile of a sorted sample, p in [0, 100].
double percentile(const std::vector<double>& sorted, double p);
double bernoulli_stddev(double frequency, int n);

void write_results_csv(std::ostream& os, const std::vector<ExperimentResult>& rows);
void write_summary(std::ostream& os, const SweepResult& sweep);
void write_decision_trace(std::ostream& os, const std::vector<DecisionTrace>& traces);

/// Frequency + time charts for one sweep, as deterministic SVG strings.
std::string frequency_chart_svg(const SweepResult& sweep);
std::string time_chart_svg(const SweepResult& sweep);

int default_thread_count();

}  // namespace braidnav
