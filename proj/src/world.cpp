#include "braidnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace braidnav {

namespace {

Eigen::Vector2d rot90cw(const Eigen::Vector2d& v) { return {v.y(), -v.x()}; }

Region region_for(const PathGeometry& path, double progress) {
  if (progress >= path.length() - 1e-9) return Region::done;
  if (progress >= path.entry_mark()) return Region::execution;
  return Region::negotiation;
}

}  // namespace

Scene::Scene(SimConfig cfg, std::vector<AgentSpec> specs)
    : cfg_(std::move(cfg)), specs_(std::move(specs)) {
  if (specs_.empty()) throw Error("scene needs at least one agent");
  paths_.reserve(specs_.size());
  frames_.reserve(specs_.size());
  for (const auto& spec : specs_) {
    std::array<PathGeometry, 3> triple{
        build_path(cfg_.geometry, spec.entry, destination_of(spec.entry, PathChoice::left)),
        build_path(cfg_.geometry, spec.entry, destination_of(spec.entry, PathChoice::straight)),
        build_path(cfg_.geometry, spec.entry, destination_of(spec.entry, PathChoice::right))};
    paths_.push_back(std::move(triple));
    frames_.push_back(ProjectionFrame::from_axis(rot90cw(cfg_.geometry.entry_heading(spec.entry))));
  }
  world_ = initial_state(*this);
}

bool Scene::all_done() const {
  for (const auto& a : world_.agents) {
    if (a.region != Region::done) return false;
  }
  return true;
}

WorldState Scene::initial_state(const Scene& scene) {
  WorldState w;
  w.time = 0.0;
  w.agents.resize(static_cast<std::size_t>(scene.agents()));
  for (int i = 0; i < scene.agents(); ++i) {
    AgentState& a = w.agents[static_cast<std::size_t>(i)];
    a.pose = scene.true_path(i).pose_at(0.0);
    a.speed = scene.spec(i).v_high;  // executions start at the preferred high speed
    a.progress = 0.0;
    a.region = Region::negotiation;
  }
  return w;
}

WorldState step(const Scene& scene, const WorldState& world, const std::vector<Control>& controls,
                double dt) {
  if (dt <= 0.0) throw Error("dt must be positive");
  if (controls.size() != world.agents.size()) throw Error("one control per agent required");
  WorldState next = world;
  next.time = world.time + dt;
  for (int i = 0; i < scene.agents(); ++i) {
    AgentState& a = next.agents[static_cast<std::size_t>(i)];
    if (a.region == Region::done) {
      a.speed = 0.0;
      continue;
    }
    const Control& u = controls[static_cast<std::size_t>(i)];
    a.pose = integrate(a.pose, u, dt, scene.config());
    a.speed = u.speed;
    const PathGeometry& path = scene.true_path(i);
    a.progress = std::max(a.progress, path.project(a.pose.position, a.progress));
    a.region = region_for(path, a.progress);
    if (a.region == Region::done) {
      // Park where integration ended; agents arriving at a shared exit must
      // not collapse onto one exact point.
      a.progress = path.length();
      a.speed = 0.0;
    }
  }
  return next;
}

SingleRollout rollout_single(const Scene& scene, int agent, PathChoice choice, double speed_cmd) {
  const SimConfig& cfg = scene.config();
  const PathGeometry& path = scene.candidate_path(agent, choice);
  const AgentState& now = scene.world().agents[static_cast<std::size_t>(agent)];

  SingleRollout out;
  if (now.region == Region::done) {
    out.poses = {now.pose};
    out.done_step = 0;
    return out;
  }
  const std::size_t max_steps =
      static_cast<std::size_t>(std::ceil(cfg.rollout_horizon / cfg.rollout_dt));
  // Integrate finer than the sample grid; the tight right-turn arc needs
  // sub-25ms Euler steps at the top speeds.
  const int substeps = std::max(1, static_cast<int>(std::lround(cfg.rollout_dt / 0.0125)));
  const double sub_dt = cfg.rollout_dt / substeps;
  out.poses.reserve(256);
  Pose pose = now.pose;
  double progress = now.progress;
  out.poses.push_back(pose);
  for (std::size_t k = 0; k < max_steps; ++k) {
    bool finished = false;
    for (int s = 0; s < substeps && !finished; ++s) {
      const Control u = tracking_controller(pose, path, speed_cmd, cfg, progress);
      pose = integrate(pose, u, sub_dt, cfg);
      progress = std::max(progress, path.project(pose.position, progress));
      finished = progress >= path.length() - 1e-9;
    }
    out.poses.push_back(pose);
    if (finished) {
      out.done_step = out.poses.size() - 1;
      return out;
    }
  }
  return out;  // horizon cap reached, done_step stays SIZE_MAX
}

std::uint32_t HypTuple::encode() const {
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    code |= (static_cast<std::uint32_t>(paths[i]) | (static_cast<std::uint32_t>(speeds[i]) << 2))
            << (3 * i);
  }
  return code;
}

double min_distance(const Scene& scene, const WorldState& world) {
  const int n = static_cast<int>(world.agents.size());
  if (n < 2) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::array<Eigen::Vector2d, 4>> rects;
  rects.reserve(static_cast<std::size_t>(n));
  for (const auto& a : world.agents) rects.push_back(car_corners(a.pose, scene.config().geometry));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::min(best, min_rectangle_distance(rects[static_cast<std::size_t>(i)],
                                                   rects[static_cast<std::size_t>(j)]));
    }
  }
  return best;
}

namespace {

Pose lerp_pose(const Pose& a, const Pose& b, double u) {
  Pose p;
  p.position = (1.0 - u) * a.position + u * b.position;
  double dh = b.heading - a.heading;
  while (dh > M_PI) dh -= 2.0 * M_PI;
  while (dh < -M_PI) dh += 2.0 * M_PI;
  p.heading = a.heading + u * dh;
  return p;
}

struct PairScan {
  double d_min = std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
};

/// Minimum pairwise rectangle distance over the hypothesis, with a bounding
/// radius prune and a local interpolation refinement around each pair's
/// coarsest minimum.
double scan_d_min(const Scene& scene,
                  const std::vector<const SingleRollout*>& singles, std::size_t steps) {
  const int n = static_cast<int>(singles.size());
  if (n < 2) return std::numeric_limits<double>::infinity();
  const IntersectionGeometry& geom = scene.config().geometry;
  const double bound_radius =
      std::hypot(geom.car_length, geom.car_width);  // 2 * half-diagonal

  std::vector<PairScan> scans(static_cast<std::size_t>(n * (n - 1) / 2));
  double global = std::numeric_limits<double>::infinity();
  std::size_t pair = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++pair) {
      PairScan& ps = scans[pair];
      for (std::size_t k = 0; k <= steps; ++k) {
        const Pose& pa = singles[static_cast<std::size_t>(i)]->pose_at(k);
        const Pose& pb = singles[static_cast<std::size_t>(j)]->pose_at(k);
        const double center = (pa.position - pb.position).norm();
        double d;
        if (center - bound_radius > ps.d_min) {
          continue;
        }
        d = min_rectangle_distance(car_corners(pa, geom), car_corners(pb, geom));
        if (d < ps.d_min) {
          ps.d_min = d;
          ps.argmin = k;
          if (d == 0.0) break;
        }
      }
      // Refine between samples around the coarse minimum.
      if (ps.d_min > 0.0 && std::isfinite(ps.d_min)) {
        const std::size_t k0 = ps.argmin > 0 ? ps.argmin - 1 : 0;
        const std::size_t k1 = std::min(ps.argmin + 1, steps);
        for (int half = 0; half < 2; ++half) {
          const std::size_t ka = half == 0 ? k0 : ps.argmin;
          const std::size_t kb = half == 0 ? ps.argmin : k1;
          if (ka == kb) continue;
          const Pose pa = lerp_pose(singles[static_cast<std::size_t>(i)]->pose_at(ka),
                                    singles[static_cast<std::size_t>(i)]->pose_at(kb), 0.5);
          const Pose pb = lerp_pose(singles[static_cast<std::size_t>(j)]->pose_at(ka),
                                    singles[static_cast<std::size_t>(j)]->pose_at(kb), 0.5);
          ps.d_min = std::min(ps.d_min,
                              min_rectangle_distance(car_corners(pa, geom), car_corners(pb, geom)));
        }
      }
      global = std::min(global, ps.d_min);
    }
  }
  return global;
}

std::size_t hypothesis_steps(const std::vector<const SingleRollout*>& singles) {
  std::size_t steps = 1;
  for (const auto* s : singles) steps = std::max(steps, s->steps());
  return steps;
}

SystemTrajectory zip_singles(const Scene& scene,
                             const std::vector<const SingleRollout*>& singles,
                             std::size_t steps) {
  SystemTrajectory traj;
  traj.times.resize(steps + 1);
  const double t0 = scene.world().time;
  for (std::size_t k = 0; k <= steps; ++k) {
    traj.times[k] = t0 + static_cast<double>(k) * scene.config().rollout_dt;
  }
  traj.states.resize(singles.size());
  for (std::size_t i = 0; i < singles.size(); ++i) {
    auto& row = traj.states[i];
    row.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) row[k] = singles[i]->pose_at(k);
  }
  return traj;
}

}  // namespace

RolloutOutcome rollout(const Scene& scene, const HypTuple& hyp) {
  std::vector<SingleRollout> owned;
  owned.reserve(hyp.paths.size());
  std::vector<const SingleRollout*> singles;
  for (int i = 0; i < scene.agents(); ++i) {
    const double v = scene.speed_of(i, hyp.speeds[static_cast<std::size_t>(i)]);
    owned.push_back(rollout_single(scene, i, hyp.paths[static_cast<std::size_t>(i)], v));
    singles.push_back(&owned.back());
  }
  const std::size_t steps = hypothesis_steps(singles);
  RolloutOutcome out;
  out.trajectory = zip_singles(scene, singles, steps);
  out.d_min = scan_d_min(scene, singles, steps);
  return out;
}

RolloutCache::RolloutCache(const Scene& scene) : scene_(scene) {
  singles_.resize(static_cast<std::size_t>(scene.agents()));
}

const SingleRollout& RolloutCache::single(int agent, PathChoice c, SpeedChoice u) {
  auto& slot = singles_[static_cast<std::size_t>(agent)][static_cast<std::size_t>(c)]
                       [static_cast<std::size_t>(u)];
  if (!slot) {
    slot = std::make_unique<SingleRollout>(
        rollout_single(scene_, agent, c, scene_.speed_of(agent, u)));
  }
  return *slot;
}

RolloutCache::Eval& RolloutCache::eval_of(const HypTuple& hyp) {
  const std::uint32_t code = hyp.encode();
  auto it = evals_.find(code);
  if (it != evals_.end()) return it->second;

  std::vector<const SingleRollout*> singles;
  singles.reserve(hyp.paths.size());
  for (int i = 0; i < scene_.agents(); ++i) {
    singles.push_back(&single(i, hyp.paths[static_cast<std::size_t>(i)],
                              hyp.speeds[static_cast<std::size_t>(i)]));
  }
  Eval ev;
  ev.steps = hypothesis_steps(singles);
  ev.d_min = scan_d_min(scene_, singles, ev.steps);
  ev.keys_by_frame.assign(static_cast<std::size_t>(scene_.agents()), std::nullopt);
  return evals_.emplace(code, std::move(ev)).first->second;
}

double RolloutCache::d_min(const HypTuple& hyp) { return eval_of(hyp).d_min; }

const BraidKey& RolloutCache::braid_key(const HypTuple& hyp, int observer) {
  Eval& ev = eval_of(hyp);
  auto& slot = ev.keys_by_frame[static_cast<std::size_t>(observer)];
  if (!slot) {
    std::vector<const SingleRollout*> singles;
    for (int i = 0; i < scene_.agents(); ++i) {
      singles.push_back(&single(i, hyp.paths[static_cast<std::size_t>(i)],
                                hyp.speeds[static_cast<std::size_t>(i)]));
    }
    const SystemTrajectory traj = zip_singles(scene_, singles, ev.steps);
    slot = canonical_key(extract_braid(traj, scene_.frame_of(observer)));
  }
  return *slot;
}

}  // namespace braidnav
