#pragma once

#include <string>
#include <vector>

namespace irs {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string line_chart_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           const std::vector<Series>& series);

}  // namespace irs
