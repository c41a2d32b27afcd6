#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vecmtk::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// A bare line chart: frame, ticks, one polyline per series, legend.
// Output depends only on the inputs (fixed-precision coordinates), so
// repeated runs produce identical files.
struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  double width = 640;
  double height = 400;
  bool zero_line = false;  // horizontal rule at y = 0 when in range
  std::vector<PlotSeries> series;

  void write(std::ostream& out) const;
};

// Round-number tick positions covering [lo, hi], about `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

std::string xml_escape(const std::string& s);

}  // namespace vecmtk::cli
