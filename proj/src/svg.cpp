#include "logcave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "logcave/common.hpp"

namespace logcave {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<SvgSeries>& series,
                      bool log_x, bool log_y, int width, int height) {
  if (series.empty()) throw ConfigError("svg_chart: no series");
  for (const SvgSeries& s : series) {
    if (s.points.empty()) throw ConfigError("svg_chart: empty series");
    for (const auto& [x, y] : s.points) {
      if (log_x && !(x > 0.0)) throw ConfigError("svg_chart: log x-axis needs positive values");
      if (log_y && !(y > 0.0)) throw ConfigError("svg_chart: log y-axis needs positive values");
    }
  }
  auto tx = [log_x](double x) { return log_x ? std::log10(x) : x; };
  auto ty = [log_y](double y) { return log_y ? std::log10(y) : y; };

  double x_min = tx(series[0].points[0].first), x_max = x_min;
  double y_min = ty(series[0].points[0].second), y_max = y_min;
  for (const SvgSeries& s : series)
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, tx(x));
      x_max = std::max(x_max, tx(x));
      y_min = std::min(y_min, ty(y));
      y_max = std::max(y_max, ty(y));
    }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double pad_x = 0.05 * (x_max - x_min), pad_y = 0.05 * (y_max - y_min);
  x_min -= pad_x;
  x_max += pad_x;
  y_min -= pad_y;
  y_max += pad_y;

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (tx(x) - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return mt + ph - (ty(y) - y_min) / (y_max - y_min) * ph; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const std::size_t n_colors = sizeof kColors / sizeof kColors[0];

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         " " + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(title) + "</text>\n";

  // Axes box and ticks with value labels.
  svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double fx = x_min + (x_max - x_min) * t / ticks;
    double fy = y_min + (y_max - y_min) * t / ticks;
    double vx = log_x ? std::pow(10.0, fx) : fx;
    double vy = log_y ? std::pow(10.0, fy) : fy;
    double gx = ml + pw * t / ticks;
    double gy = mt + ph - ph * t / ticks;
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(gx) + "\" y2=\"" +
           num(mt + ph + 5) + "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + num(gx) + "\" y=\"" + num(mt + ph + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(vx) +
           "</text>\n";
    svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(ml) + "\" y2=\"" +
           num(gy) + "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(vy) +
           "</text>\n";
  }
  svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 10.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(x_label) +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         num(mt + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kColors[si % n_colors];
    std::string pts;
    for (const auto& [x, y] : series[si].points) {
      if (!pts.empty()) pts += " ";
      pts += num(px(x)) + "," + num(py(y));
    }
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    for (const auto& [x, y] : series[si].points)
      svg += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"2.5\" fill=\"" +
             color + "\"/>\n";
    // legend entry
    double ly = mt + 14.0 + 16.0 * static_cast<double>(si);
    svg += "<line x1=\"" + num(ml + pw - 120) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(ml + pw - 100) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(ml + pw - 94) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(series[si].label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace logcave
