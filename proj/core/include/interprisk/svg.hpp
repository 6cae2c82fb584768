#pragma once

#include <string>
#include <vector>

namespace interprisk::svg {

struct Bar {
  std::string label;
  double value = 0.0;
};

// Horizontal bars, top to bottom in the given order; negative values are
// drawn left of the axis in a second colour.
std::string bar_chart(const std::string& title, const std::vector<Bar>& bars);

struct Series {
  std::string name;
  std::vector<double> x, y;
};

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

// One small matrix per panel; cells are shaded by value in [0, 1].
struct HeatmapPanel {
  std::string title;
  std::vector<std::string> row_labels, col_labels;
  std::vector<std::vector<double>> cells;
};

std::string heatmaps(const std::string& title, const std::vector<HeatmapPanel>& panels);

}  // namespace interprisk::svg
