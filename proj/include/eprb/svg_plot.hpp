#pragma once

#include <string>
#include <vector>

namespace eprb {

struct ReferenceLine {
  double y;
  std::string label;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<ReferenceLine> references;  // dashed horizontal lines
};

/// Self-contained SVG document: axes, ticks, the polyline with markers and
/// the dashed reference lines.
std::string render_svg(const LinePlot& plot);

}  // namespace eprb
