#pragma once

#include <string>
#include <vector>

namespace braidnav {

/// Deterministic SVG bar chart with asymmetric error bars (same input bytes
/// in, same output bytes out; suitable for golden-file comparison).
struct BarChartSpec {
  std::string title;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<double> values;
  std::vector<double> err_low;   // absolute bar endpoints (value - err)
  std::vector<double> err_high;  // absolute bar endpoints (value + err)
  double y_max_hint = 0.0;       // 0: autoscale
};

std::string svg_bar_chart(const BarChartSpec& spec);

/// Distance-covered-vs-time lines, one per agent, with a horizontal marker
/// at the intersection arrival distance.
struct DistanceTimeSpec {
  std::string title;
  std::vector<std::vector<double>> times;      // per agent
  std::vector<std::vector<double>> distances;  // per agent
  double arrival_mark = 0.0;                   // black line height
  double t_max_hint = 0.0;
};

std::string svg_distance_time(const DistanceTimeSpec& spec);

}  // namespace braidnav
