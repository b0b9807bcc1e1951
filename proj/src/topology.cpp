#include "braidnav/topology.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace braidnav {

ProjectionFrame ProjectionFrame::from_axis(const Eigen::Vector2d& axis) {
  const double n = axis.norm();
  if (n <= 0.0 || !std::isfinite(n)) throw Error("projection axis must be nonzero");
  return ProjectionFrame{axis / n};
}

void SystemTrajectory::validate() const {
  if (times.size() < 2) throw TrajectoryFormatError("trajectory needs at least 2 samples");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw TrajectoryFormatError("trajectory times must be strictly increasing");
    }
  }
  for (const auto& s : states) {
    if (s.size() != times.size()) {
      throw TrajectoryFormatError("agent series length disagrees with time grid");
    }
  }
  if (states.empty()) throw TrajectoryFormatError("trajectory has no agents");
}

Eigen::Vector2d NormalizedStrands::point(int agent, std::size_t sample) const {
  if (sample == 0) {
    return {static_cast<double>(start_ranks_.image(agent)), 0.0};
  }
  if (sample + 1 == samples()) {
    return {static_cast<double>(final_ranks_.image(start_ranks_.image(agent))), 0.0};
  }
  return raw_point(agent, sample);
}

namespace {

// Rank agents by frame-x at one sample; ties break by frame-y, then index.
Permutation rank_by_x(const std::vector<std::vector<Eigen::Vector2d>>& pts, std::size_t k) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = pts[static_cast<std::size_t>(a)][k];
    const auto& pb = pts[static_cast<std::size_t>(b)][k];
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return a < b;
  });
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) images[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;
  return Permutation::from_images(images);
}

}  // namespace

NormalizedStrands normalize_strands(const SystemTrajectory& traj, const ProjectionFrame& frame) {
  traj.validate();
  const int n = traj.agents();
  const std::size_t K = traj.samples();

  NormalizedStrands out;
  out.abscissa_.resize(K);
  const double t0 = traj.times.front();
  const double span = traj.times.back() - t0;
  for (std::size_t k = 0; k < K; ++k) out.abscissa_[k] = (traj.times[k] - t0) / span;
  out.abscissa_.front() = 0.0;
  out.abscissa_.back() = 1.0;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  std::vector<std::vector<Eigen::Vector2d>> proj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = proj[static_cast<std::size_t>(i)];
    row.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      const auto& p = traj.states[static_cast<std::size_t>(i)][k].position;
      row[k] = {frame.x_of(p), frame.y_of(p)};
      xmin = std::min(xmin, row[k].x());
      xmax = std::max(xmax, row[k].x());
      ymin = std::min(ymin, row[k].y());
      ymax = std::max(ymax, row[k].y());
    }
  }

  if (n > 1 && xmax == xmin) {
    throw DegenerateExtentError("all agents share one projected coordinate for the whole execution");
  }
  const double xspan = (xmax > xmin) ? (xmax - xmin) : 1.0;
  const double yspan = (ymax > ymin) ? (ymax - ymin) : 0.0;

  out.raw_.assign(static_cast<std::size_t>(n), {});
  for (int i = 0; i < n; ++i) {
    auto& row = out.raw_[static_cast<std::size_t>(i)];
    row.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double rx = (proj[static_cast<std::size_t>(i)][k].x() - xmin) / xspan;
      const double ry = (yspan > 0.0) ? (proj[static_cast<std::size_t>(i)][k].y() - ymin) / yspan : 0.5;
      row[k] = {1.0 + rx * (n - 1), -1.0 + 2.0 * ry};
    }
  }

  out.start_ranks_ = rank_by_x(out.raw_, 0);
  const Permutation end_by_agent = rank_by_x(out.raw_, K - 1);
  // p_d maps t=0 rank to final rank: p_d(p_s(i)) = final rank of agent i.
  std::vector<int> pd(static_cast<std::size_t>(n));
  for (int agent = 1; agent <= n; ++agent) {
    pd[static_cast<std::size_t>(out.start_ranks_.image(agent) - 1)] = end_by_agent.image(agent);
  }
  out.final_ranks_ = Permutation::from_images(pd);
  return out;
}

namespace {

struct RawCrossing {
  double t;
  int agent_a;  // 0-based
  int agent_b;
  int left_before;  // agent index on the lower-x side just before the swap
  double y_left;
  double y_right;
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

std::vector<CrossingEvent> detect_crossings(const NormalizedStrands& strands) {
  const int n = strands.agents();
  const std::size_t K = strands.samples();
  std::vector<RawCrossing> raw;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> dx(K), dy(K);
      for (std::size_t k = 0; k < K; ++k) {
        dx[k] = strands.raw_point(i + 1, k).x() - strands.raw_point(j + 1, k).x();
        dy[k] = strands.raw_point(i + 1, k).y() - strands.raw_point(j + 1, k).y();
        if (dx[k] == 0.0 && dy[k] == 0.0) {
          throw DegenerateCrossingError("strands coincide at a sample");
        }
      }
      // Boundary samples inherit the snapped rank order (this is also the
      // frame-y/index tie-break for exact boundary ties).
      const int start_sign =
          sign_of(strands.start_ranks().image(i + 1) - strands.start_ranks().image(j + 1));
      const int final_sign =
          sign_of(strands.final_ranks().image(strands.start_ranks().image(i + 1)) -
                  strands.final_ranks().image(strands.start_ranks().image(j + 1)));

      const auto emit = [&](double t, double yi, double yj, int sign_before) {
        raw.push_back({t, i, j, sign_before < 0 ? i : j, sign_before < 0 ? yi : yj,
                       sign_before < 0 ? yj : yi});
      };

      // A tie run is a maximal stretch of exact frame-x equality; the
      // perpendicular order must stay fixed inside it, and it contributes at
      // most one swap (placed mid-run).
      const auto check_tie_run = [&](std::size_t lo, std::size_t hi) {
        const int y_sign = sign_of(dy[lo]);
        for (std::size_t m = lo; m <= hi; ++m) {
          if (sign_of(dy[m]) != y_sign || y_sign == 0) {
            throw DegenerateCrossingError("strands intersect inside a frame-x tie");
          }
        }
      };

      std::size_t k = 0;
      int last_sign = start_sign;
      if (dx[0] == 0.0) {
        std::size_t tie_end = 0;
        while (tie_end + 1 < K && dx[tie_end + 1] == 0.0) ++tie_end;
        check_tie_run(0, tie_end);
        const int sign_after = (tie_end + 1 < K) ? sign_of(dx[tie_end + 1]) : final_sign;
        if (sign_after != last_sign) {
          const double t1 = strands.abscissa()[std::min(tie_end + 1, K - 1)];
          emit(0.5 * t1, strands.raw_point(i + 1, 0).y(), strands.raw_point(j + 1, 0).y(),
               last_sign);
          last_sign = sign_after;
        }
        k = tie_end;
      } else {
        last_sign = sign_of(dx[0]);
      }
      while (k + 1 < K) {
        const std::size_t k1 = k + 1;
        if (dx[k1] != 0.0) {
          const int s1 = sign_of(dx[k1]);
          if (s1 != last_sign && dx[k] != 0.0) {
            // Transversal swap inside the interval: linear root.
            const double frac = dx[k] / (dx[k] - dx[k1]);
            const double t = strands.abscissa()[k] +
                             frac * (strands.abscissa()[k1] - strands.abscissa()[k]);
            const double yi_c = strands.raw_point(i + 1, k).y() +
                                frac * (strands.raw_point(i + 1, k1).y() -
                                        strands.raw_point(i + 1, k).y());
            const double yj_c = strands.raw_point(j + 1, k).y() +
                                frac * (strands.raw_point(j + 1, k1).y() -
                                        strands.raw_point(j + 1, k).y());
            if (yi_c == yj_c) {
              throw DegenerateCrossingError("strands coincide at a crossing instant");
            }
            emit(t, yi_c, yj_c, last_sign);
          }
          last_sign = s1;
          k = k1;
          continue;
        }
        // Strands travel the same projected corridor for a while; the
        // perpendicular axis keeps them apart.
        std::size_t tie_end = k1;
        while (tie_end + 1 < K && dx[tie_end + 1] == 0.0) ++tie_end;
        check_tie_run(k1, tie_end);
        const int sign_after =
            (tie_end + 1 < K) ? sign_of(dx[tie_end + 1]) : final_sign;
        if (sign_after != last_sign) {
          // Exactly one swap, completed somewhere in the tie: place it at
          // the middle (no other event of this pair can interleave here).
          const double t0 = strands.abscissa()[k];
          const double t1 = strands.abscissa()[std::min(tie_end + 1, K - 1)];
          const double t = 0.5 * (t0 + t1);
          emit(t, strands.raw_point(i + 1, k1).y(), strands.raw_point(j + 1, k1).y(),
               last_sign);
        }
        last_sign = sign_after;
        k = tie_end;
      }
      if (dx[K - 1] != 0.0 && sign_of(dx[K - 1]) != final_sign) {
        throw DegenerateCrossingError("endpoint ranking disagrees with the final samples");
      }
    }
  }

  std::sort(raw.begin(), raw.end(), [](const RawCrossing& a, const RawCrossing& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.agent_a != b.agent_a) return a.agent_a < b.agent_a;
    return a.agent_b < b.agent_b;
  });

  // Walk crossings in time order, keeping the live rank of every agent.
  std::vector<int> rank_of(static_cast<std::size_t>(n));
  for (int a = 1; a <= n; ++a) rank_of[static_cast<std::size_t>(a - 1)] = strands.start_ranks().image(a);

  std::vector<CrossingEvent> events;
  std::size_t idx = 0;
  while (idx < raw.size()) {
    std::size_t grp = idx;
    while (grp + 1 < raw.size() && raw[grp + 1].t == raw[idx].t) ++grp;
    if (grp > idx) {
      for (std::size_t p = idx; p <= grp; ++p) {
        for (std::size_t q = p + 1; q <= grp; ++q) {
          if (raw[p].agent_a == raw[q].agent_a || raw[p].agent_a == raw[q].agent_b ||
              raw[p].agent_b == raw[q].agent_a || raw[p].agent_b == raw[q].agent_b) {
            throw DegenerateCrossingError("simultaneous crossings share a strand");
          }
        }
      }
      // Disjoint rank pairs at one instant: commutation makes ascending-rank
      // order a legitimate canonical choice.
      std::sort(raw.begin() + static_cast<std::ptrdiff_t>(idx),
                raw.begin() + static_cast<std::ptrdiff_t>(grp) + 1,
                [&](const RawCrossing& a, const RawCrossing& b) {
                  const int ra = std::min(rank_of[static_cast<std::size_t>(a.agent_a)],
                                          rank_of[static_cast<std::size_t>(a.agent_b)]);
                  const int rb = std::min(rank_of[static_cast<std::size_t>(b.agent_a)],
                                          rank_of[static_cast<std::size_t>(b.agent_b)]);
                  return ra < rb;
                });
    }
    for (std::size_t p = idx; p <= grp; ++p) {
      const RawCrossing& rc = raw[p];
      if (!(rc.t > 0.0) || !(rc.t < 1.0)) {
        throw DegenerateCrossingError("crossing at the trajectory boundary");
      }
      int& ra = rank_of[static_cast<std::size_t>(rc.agent_a)];
      int& rb = rank_of[static_cast<std::size_t>(rc.agent_b)];
      if (std::abs(ra - rb) != 1) {
        throw DegenerateCrossingError("crossings too dense for the sample rate (non-adjacent swap)");
      }
      const int lower_agent = (ra < rb) ? rc.agent_a : rc.agent_b;
      if (lower_agent != rc.left_before) {
        throw DegenerateCrossingError("inconsistent crossing order within one interval");
      }
      if (rc.y_left == rc.y_right) {
        throw DegenerateCrossingError("strands coincide at a crossing instant");
      }
      // Ascending strand (lower rank before the swap) in front <=> positive.
      const int sgn = rc.y_left > rc.y_right ? 1 : -1;
      events.push_back({rc.t, std::min(ra, rb), sgn});
      std::swap(ra, rb);
    }
    idx = grp + 1;
  }

  // The swaps must reproduce the endpoint ranking; otherwise the sampling
  // missed a transposition.
  for (int a = 1; a <= n; ++a) {
    if (rank_of[static_cast<std::size_t>(a - 1)] !=
        strands.final_ranks().image(strands.start_ranks().image(a))) {
      throw DegenerateCrossingError("crossing sequence does not reach the final ranking");
    }
  }
  return events;
}

BraidWord extract_braid(const SystemTrajectory& traj, const ProjectionFrame& frame) {
  if (traj.agents() == 1) {
    traj.validate();
    return BraidWord(1);
  }
  const NormalizedStrands strands = normalize_strands(traj, frame);
  const auto events = detect_crossings(strands);
  std::vector<Generator> letters;
  letters.reserve(events.size());
  for (const auto& e : events) letters.push_back(Generator{e.rank, e.sign});
  return BraidWord(traj.agents(), std::move(letters));
}

void write_trajectory_log(std::ostream& os, const SystemTrajectory& traj) {
  traj.validate();
  os << "# braidnav trajectory log: time then (x y theta) per agent; " << traj.agents()
     << " agents\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    os << traj.times[k];
    for (int i = 0; i < traj.agents(); ++i) {
      const Pose& p = traj.states[static_cast<std::size_t>(i)][k];
      os << ' ' << p.position.x() << ' ' << p.position.y() << ' ' << p.heading;
    }
    os << '\n';
  }
}

SystemTrajectory read_trajectory_log(std::istream& is) {
  SystemTrajectory traj;
  std::string line;
  int agents = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (vals.empty()) continue;
    if ((vals.size() - 1) % 3 != 0 || vals.size() < 4) {
      throw TrajectoryFormatError("record must hold time plus (x y theta) per agent");
    }
    const int n = static_cast<int>((vals.size() - 1) / 3);
    if (agents == -1) {
      agents = n;
      traj.states.assign(static_cast<std::size_t>(n), {});
    } else if (n != agents) {
      throw TrajectoryFormatError("agent count changed mid-log");
    }
    if (!traj.times.empty() && !(vals[0] > traj.times.back())) {
      throw TrajectoryFormatError("log times must be strictly increasing");
    }
    traj.times.push_back(vals[0]);
    for (int i = 0; i < n; ++i) {
      Pose p;
      p.position = {vals[static_cast<std::size_t>(1 + 3 * i)], vals[static_cast<std::size_t>(2 + 3 * i)]};
      p.heading = vals[static_cast<std::size_t>(3 + 3 * i)];
      traj.states[static_cast<std::size_t>(i)].push_back(p);
    }
  }
  traj.validate();
  return traj;
}

}  // namespace braidnav
