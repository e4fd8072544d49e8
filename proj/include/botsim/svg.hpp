#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace botsim {

struct PlotSeries {
  std::string label;
  std::vector<double> x;  // simulated days
  std::vector<double> y;  // mean sensor in-degree
};

namespace svgdetail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

}  // namespace svgdetail

// Self-contained deterministic SVG line chart: one polyline per series,
// axes in simulated days vs mean sensor in-degree, legend top-right.
inline std::string render_plot(const std::vector<PlotSeries>& series,
                               const std::string& title = "Sensor popularity") {
  using svgdetail::num;
  const double width = 900, height = 500;
  const double ml = 70, mr = 180, mt = 50, mb = 60;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmax = 0.0, ymax = 0.0;
  for (const auto& s : series) {
    for (double v : s.x) xmax = std::max(xmax, v);
    for (double v : s.y) ymax = std::max(ymax, v);
  }
  if (xmax <= 0.0) xmax = 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;

  auto sx = [&](double x) { return ml + x / xmax * pw; };
  auto sy = [&](double y) { return mt + ph - y / ymax * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
         num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(ml) + "\" y=\"30\" font-family=\"sans-serif\" "
         "font-size=\"18\">" + title + "</text>\n";

  // axes
  out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" +
         num(ml + pw) + "\" y2=\"" + num(mt + ph) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) +
         "\" y2=\"" + num(mt + ph) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 7; ++i) {
    const double x = xmax * i / 7.0;
    out += "<line x1=\"" + num(sx(x)) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" +
           num(sx(x)) + "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(mt + ph + 20) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" + num(x) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = ymax * i / 5.0;
    out += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(sy(y)) + "\" x2=\"" +
           num(ml) + "\" y2=\"" + num(sy(y)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(sy(y) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" + num(y) + "</text>\n";
  }
  out += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 15) +
         "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">time (days)</text>\n";
  out += "<text x=\"18\" y=\"" + num(mt + ph / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + num(mt + ph / 2) +
         ")\">mean sensor in-degree</text>\n";

  // series + legend
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color =
        svgdetail::kPalette[i % (sizeof(svgdetail::kPalette) /
                                 sizeof(svgdetail::kPalette[0]))];
    std::string pts;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!pts.empty()) pts += " ";
      pts += num(sx(s.x[k])) + "," + num(sy(s.y[k]));
    }
    if (n == 1) pts += " " + pts;  // degenerate single-point series
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = mt + 14.0 * static_cast<double>(i);
    out += "<line x1=\"" + num(ml + pw + 12) + "\" y1=\"" + num(ly) +
           "\" x2=\"" + num(ml + pw + 36) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(ml + pw + 42) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace botsim
