// Command-line front end: single runs, full sweeps, log replay and braid
// extraction from trajectory logs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "braidnav/experiment.hpp"
#include "braidnav/plot.hpp"
#include "braidnav/topology.hpp"

namespace fs = std::filesystem;
using namespace braidnav;

namespace {

SimConfig load_or_default(const std::string& config_path, std::uint64_t seed_override,
                          bool seed_given) {
  SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
  if (seed_given) cfg.master_seed = seed_override;
  return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
}

void emit_sweep_outputs(const fs::path& dir, const SweepResult& sweep) {
  fs::create_directories(dir);
  const std::string tag =
      to_string(sweep.scenario) + (sweep.heterogeneous ? "_het" : "_hom");
  {
    std::ostringstream os;
    write_results_csv(os, sweep.rows);
    write_file(dir / ("results_" + tag + ".csv"), os.str());
  }
  {
    std::ostringstream os;
    write_summary(os, sweep);
    write_file(dir / ("summary_" + tag + ".txt"), os.str());
    std::cout << os.str();
  }
  write_file(dir / ("frequency_" + tag + ".svg"), frequency_chart_svg(sweep));
  write_file(dir / ("time_" + tag + ".svg"), time_chart_svg(sweep));
}

DistanceTimeSpec distance_time_spec(const SystemTrajectory& traj, const SimConfig& cfg,
                                    const std::string& title) {
  DistanceTimeSpec spec;
  spec.title = title;
  spec.arrival_mark = cfg.geometry.lane_length;
  spec.times.resize(static_cast<std::size_t>(traj.agents()));
  spec.distances.resize(static_cast<std::size_t>(traj.agents()));
  for (int i = 0; i < traj.agents(); ++i) {
    double covered = 0.0;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      if (k > 0) {
        covered += (traj.states[static_cast<std::size_t>(i)][k].position -
                    traj.states[static_cast<std::size_t>(i)][k - 1].position)
                       .norm();
      }
      spec.times[static_cast<std::size_t>(i)].push_back(traj.times[k]);
      spec.distances[static_cast<std::size_t>(i)].push_back(covered);
    }
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"braidnav: braid-based multimodal inference and entropy-minimizing "
               "planning at an unsignalized intersection"};
  app.require_subcommand(1);

  std::string scenario_str = "s1", condition_str = "c2", config_path, out_dir = "out";
  std::string log_path;
  std::uint64_t seed = 0;
  bool seed_given = false, heterogeneous = false;
  int cell = -1, agent = 1;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
      seed_given = true;
    });
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario under one condition");
  run->add_option("--scenario", scenario_str, "s1|s2|s3")->required();
  run->add_option("--condition", condition_str, "c1..c5")->required();
  run->add_flag("--heterogeneous", heterogeneous, "replace agent 1 with an inattentive agent");
  add_seed(run);
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--cell", cell, "run a single speed-grid cell (default: all cells)");
  run->add_option("--config", config_path, "JSON config overrides");

  CLI::App* sweep = app.add_subcommand("sweep", "scenario x condition sweeps");
  bool sweep_all = false;
  sweep->add_flag("--all", sweep_all, "S1-S3 x C1-C5, homogeneous and heterogeneous");
  add_seed(sweep);
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--config", config_path, "JSON config overrides");

  CLI::App* replay = app.add_subcommand("replay", "recompute metrics from a trajectory log");
  replay->add_option("--log", log_path, "trajectory log file")->required();
  replay->add_option("--out", out_dir, "output directory for the spacetime plot");

  CLI::App* braid = app.add_subcommand("braid", "extract the braid word from a trajectory log");
  braid->add_option("--log", log_path, "trajectory log file")->required();
  braid->add_option("--agent", agent, "1-based observer agent (its frame)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const SimConfig cfg = load_or_default(config_path, seed, seed_given);
      const Scenario scenario = scenario_from_string(scenario_str);
      const Condition condition = condition_from_string(condition_str);
      if (cell >= 0) {
        ExperimentSetup setup;
        setup.config = cfg;
        setup.scenario = scenario;
        setup.condition = condition;
        setup.heterogeneous = heterogeneous;
        setup.cell = cell;
        setup.record_trajectory = true;
        setup.record_decisions = true;
        const ExperimentResult r = run_experiment(setup);
        fs::create_directories(out_dir);
        const std::string tag = to_string(scenario) + "_" + to_string(condition) +
                                (heterogeneous ? "_het_" : "_hom_") + "cell" + std::to_string(cell);
        {
          std::ofstream os(fs::path(out_dir) / ("trajectory_" + tag + ".log"));
          write_trajectory_log(os, r.trajectory);
        }
        {
          std::ofstream os(fs::path(out_dir) / ("decisions_" + tag + ".jsonl"));
          write_decision_trace(os, r.decisions);
        }
        write_file(fs::path(out_dir) / ("spacetime_" + tag + ".svg"),
                   svg_distance_time(distance_time_spec(
                       r.trajectory, cfg, "Distance covered per agent (" + tag + ")")));
        std::cout << "cell " << cell << ": collided=" << (r.collided ? 1 : 0) << " status="
                  << (r.status == RunStatus::completed ? "completed" : "timeout")
                  << " max_time=" << r.max_time << "\n";
        for (int i = 0; i < static_cast<int>(r.box_arrival.size()); ++i) {
          std::cout << "  agent " << (i + 1) << ": box_arrival=" << r.box_arrival[static_cast<std::size_t>(i)]
                    << " dest_arrival=" << r.dest_arrival[static_cast<std::size_t>(i)] << "\n";
        }
        // Realized topology, one word per observer frame.
        ScenarioSpec sspec = ScenarioSpec::of(scenario);
        for (int i = 0; i < sspec.agents(); ++i) {
          const auto axis = cfg.geometry.entry_heading(sspec.entries[static_cast<std::size_t>(i)]);
          const ProjectionFrame frame =
              ProjectionFrame::from_axis(Eigen::Vector2d{axis.y(), -axis.x()});
          const BraidWord w = extract_braid(r.trajectory, frame);
          std::cout << "  braid (agent " << (i + 1) << " frame, " << w.strands()
                    << " strands): " << to_text(w) << "\n";
        }
      } else {
        SweepRequest req;
        req.config = cfg;
        req.scenario = scenario;
        req.conditions = {condition};
        req.heterogeneous = heterogeneous;
        emit_sweep_outputs(out_dir, run_sweep(req));
      }
    } else if (*sweep) {
      if (!sweep_all) {
        std::cerr << "sweep: pass --all\n";
        return 2;
      }
      const SimConfig cfg = load_or_default(config_path, seed, seed_given);
      const std::vector<Condition> conditions = {Condition::C1, Condition::C2, Condition::C3,
                                                 Condition::C4, Condition::C5};
      for (bool het : {false, true}) {
        for (Scenario s : {Scenario::S1, Scenario::S2, Scenario::S3}) {
          SweepRequest req;
          req.config = cfg;
          req.scenario = s;
          req.conditions = conditions;
          req.heterogeneous = het;
          emit_sweep_outputs(out_dir, run_sweep(req));
        }
      }
    } else if (*replay) {
      std::ifstream in(log_path);
      if (!in) throw Error("cannot open log '" + log_path + "'");
      const SystemTrajectory traj = read_trajectory_log(in);
      std::cout << "agents: " << traj.agents() << "\n";
      std::cout << "samples: " << traj.samples() << "\n";
      std::cout << "duration: " << (traj.times.back() - traj.times.front()) << " s\n";
      const SimConfig cfg;
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "replay_spacetime.svg",
                 svg_distance_time(distance_time_spec(traj, cfg, "Distance covered per agent")));
    } else if (*braid) {
      std::ifstream in(log_path);
      if (!in) throw Error("cannot open log '" + log_path + "'");
      const SystemTrajectory traj = read_trajectory_log(in);
      if (agent < 1 || agent > traj.agents()) throw Error("agent index out of range");
      // Frame from the agent's initial heading (driver's right axis).
      const Pose& p0 = traj.states[static_cast<std::size_t>(agent - 1)].front();
      const Eigen::Vector2d heading{std::cos(p0.heading), std::sin(p0.heading)};
      const ProjectionFrame frame =
          ProjectionFrame::from_axis(Eigen::Vector2d{heading.y(), -heading.x()});
      const BraidWord w = extract_braid(traj, frame);
      std::cout << "strands: " << w.strands() << "\n";
      std::cout << "word: " << to_text(w) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
