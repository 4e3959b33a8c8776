#pragma once

#include <string>
#include <utility>
#include <vector>

namespace logcave {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Self-contained SVG line chart (no external references); a pure function of
// its inputs, so identical data yields identical bytes. Log axes require
// positive coordinates.
std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<SvgSeries>& series,
                      bool log_x = false, bool log_y = false, int width = 640, int height = 400);

}  // namespace logcave
