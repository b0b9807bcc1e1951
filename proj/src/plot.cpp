#include "braidnav/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "braidnav/errors.hpp"

namespace braidnav {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 46.0, kMarginB = 54.0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string svg_header(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\">"
     << title << "</text>\n";
  return os.str();
}

void axes(std::ostringstream& os, const std::string& y_label) {
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
     << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL << "\" y2=\""
     << kHeight - kMarginB << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"16\" y=\"" << (kMarginT + kHeight - kMarginB) / 2
     << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
        "16 "
     << (kMarginT + kHeight - kMarginB) / 2 << ")\">" << y_label << "</text>\n";
}

const char* kBarColors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#f39c12"};

}  // namespace

std::string svg_bar_chart(const BarChartSpec& spec) {
  const std::size_t n = spec.values.size();
  if (spec.categories.size() != n || spec.err_low.size() != n || spec.err_high.size() != n) {
    throw Error("bar chart arrays must have equal length");
  }
  double ymax = spec.y_max_hint;
  if (ymax <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) ymax = std::max(ymax, spec.err_high[i]);
    for (std::size_t i = 0; i < n; ++i) ymax = std::max(ymax, spec.values[i]);
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.15;
  }
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const auto ypix = [&](double v) { return kHeight - kMarginB - std::clamp(v / ymax, 0.0, 1.0) * plot_h; };

  std::ostringstream os;
  os << svg_header(spec.title);
  axes(os, spec.y_label);
  // y ticks
  for (int t = 0; t <= 4; ++t) {
    const double v = ymax * t / 4.0;
    os << "<line x1=\"" << kMarginL - 4 << "\" y1=\"" << num(ypix(v)) << "\" x2=\"" << kMarginL
       << "\" y2=\"" << num(ypix(v)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << num(ypix(v) + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(v)
       << "</text>\n";
  }
  const double slot = n > 0 ? plot_w / static_cast<double>(n) : plot_w;
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = kMarginL + slot * (static_cast<double>(i) + 0.5);
    const double bw = slot * 0.55;
    const double top = ypix(spec.values[i]);
    os << "<rect x=\"" << num(cx - bw / 2) << "\" y=\"" << num(top) << "\" width=\"" << num(bw)
       << "\" height=\"" << num(kHeight - kMarginB - top) << "\" fill=\""
       << kBarColors[i % 5] << "\"/>\n";
    const double e_lo = ypix(spec.err_low[i]);
    const double e_hi = ypix(spec.err_high[i]);
    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(e_lo) << "\" x2=\"" << num(cx)
       << "\" y2=\"" << num(e_hi) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    os << "<line x1=\"" << num(cx - 6) << "\" y1=\"" << num(e_lo) << "\" x2=\"" << num(cx + 6)
       << "\" y2=\"" << num(e_lo) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    os << "<line x1=\"" << num(cx - 6) << "\" y1=\"" << num(e_hi) << "\" x2=\"" << num(cx + 6)
       << "\" y2=\"" << num(e_hi) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << num(cx) << "\" y=\"" << kHeight - kMarginB + 18
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
       << spec.categories[i] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_distance_time(const DistanceTimeSpec& spec) {
  if (spec.times.size() != spec.distances.size()) {
    throw Error("distance/time series count mismatch");
  }
  double tmax = spec.t_max_hint, dmax = spec.arrival_mark;
  for (const auto& row : spec.times) {
    for (double t : row) tmax = std::max(tmax, t);
  }
  for (const auto& row : spec.distances) {
    for (double d : row) dmax = std::max(dmax, d);
  }
  if (tmax <= 0.0) tmax = 1.0;
  if (dmax <= 0.0) dmax = 1.0;
  dmax *= 1.05;
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const auto xpix = [&](double t) { return kMarginL + std::clamp(t / tmax, 0.0, 1.0) * plot_w; };
  const auto ypix = [&](double d) { return kHeight - kMarginB - std::clamp(d / dmax, 0.0, 1.0) * plot_h; };

  std::ostringstream os;
  os << svg_header(spec.title);
  axes(os, "distance covered (m)");
  os << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\"" << kHeight - 16
     << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">time (s)</text>\n";
  if (spec.arrival_mark > 0.0) {
    os << "<line x1=\"" << kMarginL << "\" y1=\"" << num(ypix(spec.arrival_mark)) << "\" x2=\""
       << kWidth - kMarginR << "\" y2=\"" << num(ypix(spec.arrival_mark))
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  for (std::size_t i = 0; i < spec.times.size(); ++i) {
    const auto& ts = spec.times[i];
    const auto& ds = spec.distances[i];
    if (ts.size() != ds.size() || ts.empty()) throw Error("bad series");
    os << "<polyline fill=\"none\" stroke=\"" << kBarColors[i % 5]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (k) os << ' ';
      os << num(xpix(ts[k])) << ',' << num(ypix(ds[k]));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace braidnav
