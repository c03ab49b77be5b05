#pragma once

#include <string>
#include <vector>

namespace aopt {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  // y values are log10 of the plotted quantity; ticks are labelled 10^k.
  bool y_log10 = false;
  std::vector<PlotSeries> series;
};

// Standalone SVG document: axes, ticks, one polyline per series and a legend.
std::string render_svg(const PlotPanel& panel);

// Escape &, <, >, " for use in SVG text and attributes.
std::string xml_escape(const std::string& text);

}  // namespace aopt
