#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace helpfuse {

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // plotted in the given order
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<ChartSeries> series;
};

// Static SVG line chart; output bytes depend only on the spec.
void write_line_chart(const ChartSpec& spec, const std::filesystem::path& path);

}  // namespace helpfuse
