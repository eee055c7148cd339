#ifndef COMPACTKNAP_SVG_HPP
#define COMPACTKNAP_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace compactknap::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  /// Lines join the points; otherwise markers only.
  bool lines = true;
  /// Staircase lines, for cumulative profiles.
  bool steps = false;
  std::vector<Series> series;
};

/// Standalone SVG document: axes with ticks, one colour per series, legend.
/// Non-finite points are skipped.
std::string render(const Chart &chart);

std::string escape(const std::string &text);

} // namespace compactknap::svg

#endif
